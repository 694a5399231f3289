#include "csgen/tokenize.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "csgen/error.hpp"

namespace csgen {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Decodes one UTF-8 code point starting at text[i]; advances i. Malformed
// bytes decode to U+FFFD one byte at a time and set *malformed (a literal,
// well-encoded U+FFFD does not).
char32_t decode_utf8(std::string_view text, std::size_t& i, bool* malformed = nullptr) {
  const auto byte = [&](std::size_t off) -> unsigned {
    return static_cast<unsigned char>(text[off]);
  };
  const auto bad = [&] {
    ++i;
    if (malformed) *malformed = true;
    return kReplacement;
  };
  const unsigned b0 = byte(i);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return bad();
  }
  if (i + len > text.size()) return bad();
  for (std::size_t k = 1; k < len; ++k) {
    const unsigned bk = byte(i + k);
    if ((bk & 0xC0) != 0x80) return bad();
    cp = (cp << 6) | (bk & 0x3F);
  }
  // Reject overlong encodings and surrogates.
  if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
      (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
    return bad();
  }
  i += len;
  return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_unicode_space(char32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Code points stripped from token edges: punctuation and symbols. ASCII
// non-alphanumerics, the Latin-1 punctuation block (keeping the letters
// ª, µ, º and numeric forms), general punctuation, and CJK punctuation.
bool is_edge_punct(char32_t cp) {
  if (cp < 0x80)
    return !((cp >= '0' && cp <= '9') || (cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z'));
  if (cp >= 0xA1 && cp <= 0xBF) {
    switch (cp) {
      case 0xAA: case 0xB2: case 0xB3: case 0xB5: case 0xB9:
      case 0xBA: case 0xBC: case 0xBD: case 0xBE:
        return false;
      default:
        return true;
    }
  }
  if (cp == 0xD7 || cp == 0xF7 || cp == 0xAD) return true;
  if (cp >= 0x2000 && cp <= 0x206F) return true;
  if (cp >= 0x3000 && cp <= 0x303F) return true;
  return cp == kReplacement;
}

char32_t lower_cp(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;  // Latin-1
  if (cp == 0x178) return 0xFF;                                  // Y with diaeresis
  if (cp >= 0x100 && cp <= 0x137) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x139 && cp <= 0x148) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x14A && cp <= 0x177) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x179 && cp <= 0x17E) return (cp % 2 == 1) ? cp + 1 : cp;
  return cp;
}

}  // namespace

bool utf8_valid(std::string_view text) {
  std::size_t i = 0;
  bool malformed = false;
  while (i < text.size()) {
    decode_utf8(text, i, &malformed);
    if (malformed) return false;
  }
  return true;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::vector<char32_t> current;

  const auto flush = [&] {
    if (current.empty()) return;
    std::size_t begin = 0;
    std::size_t end = current.size();
    while (begin < end && is_edge_punct(current[begin])) ++begin;
    while (end > begin && is_edge_punct(current[end - 1])) --end;
    if (begin < end) {
      std::string token;
      for (std::size_t k = begin; k < end; ++k) encode_utf8(lower_cp(current[k]), token);
      tokens.push_back(std::move(token));
    }
    current.clear();
  };

  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t cp = decode_utf8(text, i);
    if (is_unicode_space(cp)) {
      flush();
    } else {
      current.push_back(cp);
    }
  }
  flush();
  return tokens;
}

Vocabulary build_vocabulary(std::span<const std::string> wordlist, std::string_view hate_speech) {
  Vocabulary vocab;
  std::unordered_set<std::string> seen;
  for (const auto& word : wordlist) {
    if (word.empty()) continue;
    if (seen.insert(word).second) {
      vocab.words.push_back(word);
      ++vocab.from_wordlist;
    }
  }
  for (auto& token : tokenize(hate_speech)) {
    if (seen.insert(token).second) {
      vocab.words.push_back(std::move(token));
      ++vocab.from_hs;
    }
  }
  if (vocab.words.empty()) throw DataError("empty vocabulary");
  return vocab;
}

Candidate append_mutation(const Candidate& parent, const Vocabulary& vocab, int width, Rng& rng) {
  if (width < 1) throw ConfigError("append width must be positive");
  if (vocab.words.empty()) throw DataError("empty vocabulary");
  std::string text = parent.text;
  for (int i = 0; i < width; ++i) {
    const auto idx = rng.next_below(vocab.words.size());
    text += ' ';
    text += vocab.words[static_cast<std::size_t>(idx)];
  }
  return make_append_candidate(std::move(text), parent);
}

std::vector<std::string> load_wordlist(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open word list: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();
  if (!utf8_valid(content)) throw DataError("word list is not valid UTF-8: " + path.string());

  std::vector<std::string> words;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string::npos) end = content.size();
    std::string line = content.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) {
      if (pos > content.size()) break;
      continue;
    }
    const auto last = line.find_last_not_of(" \t");
    line = line.substr(first, last - first + 1);
    if (line.empty() || line.front() == '#') {
      if (pos > content.size()) break;
      continue;
    }
    words.push_back(std::move(line));
    if (pos > content.size()) break;
  }
  return words;
}

}  // namespace csgen
