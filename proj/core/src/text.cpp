#include "csgen/text.hpp"

#include <array>

namespace csgen {

std::string render_template(std::string_view tmpl,
                            std::span<const std::pair<std::string_view, std::string_view>> slots) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      bool matched = false;
      for (const auto& [key, value] : slots) {
        if (tmpl.substr(i, key.size()) == key) {
          out += value;
          i += key.size();
          matched = true;
          break;
        }
      }
      if (matched) continue;
    }
    out += tmpl[i++];
  }
  return out;
}

namespace {

constexpr std::string_view kAsciiSpace = " \t\r\n\f\v";

// UTF-8 encodings of quote characters models like to wrap replies in.
constexpr std::array<std::string_view, 8> kQuotes = {
    "\"", "'", "‘", "’", "“", "”", "«", "»"};

std::string_view trim_space(std::string_view s) {
  while (!s.empty() && kAsciiSpace.find(s.front()) != std::string_view::npos) s.remove_prefix(1);
  while (!s.empty() && kAsciiSpace.find(s.back()) != std::string_view::npos) s.remove_suffix(1);
  return s;
}

std::size_t leading_quote(std::string_view s) {
  for (std::string_view q : kQuotes) {
    if (s.substr(0, q.size()) == q) return q.size();
  }
  return 0;
}

std::size_t trailing_quote(std::string_view s) {
  for (std::string_view q : kQuotes) {
    if (s.size() >= q.size() && s.substr(s.size() - q.size()) == q) return q.size();
  }
  return 0;
}

}  // namespace

std::string trim_generated(std::string_view text) {
  std::string_view s = trim_space(text);
  for (;;) {
    std::size_t front = leading_quote(s);
    if (front == 0) break;
    std::size_t back = trailing_quote(s.substr(front));
    if (back == 0) break;
    s.remove_prefix(front);
    s.remove_suffix(back);
    s = trim_space(s);
  }
  return std::string(s);
}

}  // namespace csgen
