#include "csgen/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <unordered_map>
#include <unordered_set>

#include <spdlog/spdlog.h>

#include "csgen/error.hpp"
#include "csgen/tokenize.hpp"

namespace csgen::metrics {

namespace {

// Joins a token window into a hashable key; \x1f cannot appear in tokens.
std::string ngram_key(std::span<const std::string> tokens, std::size_t start, int n) {
  std::string key;
  for (int i = 0; i < n; ++i) {
    if (i) key += '\x1f';
    key += tokens[start + static_cast<std::size_t>(i)];
  }
  return key;
}

std::unordered_map<std::string, int> ngram_counts(std::span<const std::string> tokens, int n) {
  std::unordered_map<std::string, int> counts;
  if (tokens.size() < static_cast<std::size_t>(n)) return counts;
  for (std::size_t start = 0; start + static_cast<std::size_t>(n) <= tokens.size(); ++start) {
    ++counts[ngram_key(tokens, start, n)];
  }
  return counts;
}

}  // namespace

double bleu(std::span<const std::string> candidate, std::span<const Tokens> references,
            int max_n) {
  if (references.empty()) throw DataError("bleu needs at least one reference");
  if (max_n < 1) throw DataError("bleu max_n must be positive");
  if (candidate.empty()) {
    spdlog::warn("bleu: empty candidate scores 0");
    return 0.0;
  }

  const std::size_t c = candidate.size();
  // Effective reference length: closest to c, ties to the shorter.
  std::size_t r = references[0].size();
  for (const Tokens& ref : references) {
    const auto diff = [&](std::size_t len) {
      return len > c ? len - c : c - len;
    };
    if (diff(ref.size()) < diff(r) || (diff(ref.size()) == diff(r) && ref.size() < r)) {
      r = ref.size();
    }
  }

  double log_precision_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    std::unordered_map<std::string, int> cand_counts = ngram_counts(candidate, n);
    std::unordered_map<std::string, int> max_ref_counts;
    for (const Tokens& ref : references) {
      for (const auto& [gram, count] : ngram_counts(ref, n)) {
        auto& best = max_ref_counts[gram];
        best = std::max(best, count);
      }
    }
    long long clipped = 0;
    long long total = 0;
    for (const auto& [gram, count] : cand_counts) {
      total += count;
      auto it = max_ref_counts.find(gram);
      if (it != max_ref_counts.end()) clipped += std::min(count, it->second);
    }
    double precision;
    if (n == 1) {
      if (clipped == 0) return 0.0;  // unsmoothed: no unigram overlap means 0
      precision = static_cast<double>(clipped) / static_cast<double>(total);
    } else {
      precision = static_cast<double>(clipped + 1) / static_cast<double>(total + 1);
    }
    log_precision_sum += std::log(precision);
  }

  const double geo_mean = std::exp(log_precision_sum / max_n);
  const double bp =
      c >= r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));
  return geo_mean * bp;
}

double rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference) {
  if (candidate.empty() || reference.empty()) {
    spdlog::warn("rouge_l: empty input scores 0");
    return 0.0;
  }
  const std::size_t m = candidate.size();
  const std::size_t n = reference.size();
  // Row-rolling LCS table.
  std::vector<std::size_t> prev(n + 1, 0);
  std::vector<std::size_t> curr(n + 1, 0);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      if (candidate[i - 1] == reference[j - 1]) {
        curr[j] = prev[j - 1] + 1;
      } else {
        curr[j] = std::max(prev[j], curr[j - 1]);
      }
    }
    std::swap(prev, curr);
  }
  const std::size_t lcs = prev[n];
  if (lcs == 0) return 0.0;
  const double p = static_cast<double>(lcs) / static_cast<double>(m);
  const double r = static_cast<double>(lcs) / static_cast<double>(n);
  return 2.0 * p * r / (p + r);
}

double novelty(std::span<const Tokens> generated, std::span<const Tokens> training_corpus,
               int n) {
  if (generated.empty()) throw DataError("novelty needs a non-empty generated corpus");
  if (n < 1) throw DataError("novelty n must be positive");

  std::unordered_map<std::string, int> generated_counts;
  for (const Tokens& text : generated) {
    for (const auto& [gram, count] : ngram_counts(text, n)) generated_counts[gram] += count;
  }
  std::unordered_set<std::string> training_grams;
  for (const Tokens& text : training_corpus) {
    for (const auto& [gram, count] : ngram_counts(text, n)) training_grams.insert(gram);
  }

  std::size_t non_singleton = 0;
  std::size_t novel = 0;
  for (const auto& [gram, count] : generated_counts) {
    if (count < 2) continue;
    ++non_singleton;
    if (!training_grams.count(gram)) ++novel;
  }
  if (non_singleton == 0) {
    spdlog::warn("novelty: no repeated {}-grams in the generated corpus; scoring 0", n);
    return 0.0;
  }
  return static_cast<double>(novel) / static_cast<double>(non_singleton);
}

double gen_len(std::span<const Tokens> generated) {
  if (generated.empty()) throw DataError("gen_len needs a non-empty corpus");
  std::size_t total = 0;
  for (const Tokens& text : generated) total += text.size();
  return static_cast<double>(total) / static_cast<double>(generated.size());
}

MetricReport evaluate(std::span<const EvalItem> items,
                      std::span<const std::string> training_texts, int bleu_max_n,
                      int novelty_n) {
  if (items.empty()) throw DataError("cannot evaluate an empty item list");

  MetricReport report;
  std::vector<Tokens> generated_tokens;
  generated_tokens.reserve(items.size());
  for (const EvalItem& item : items) {
    if (item.reference.empty()) {
      throw DataError("item " + item.id + " has no reference counterspeech");
    }
    Tokens cand = tokenize(item.candidate);
    Tokens ref = tokenize(item.reference);
    ItemMetrics im;
    im.id = item.id;
    const Tokens refs[] = {ref};
    im.bleu = bleu(cand, refs, bleu_max_n);
    im.rouge_l = rouge_l(cand, ref);
    im.gen_len = static_cast<double>(cand.size());
    report.bleu += im.bleu;
    report.rouge_l += im.rouge_l;
    report.gen_len += im.gen_len;
    report.per_item.push_back(std::move(im));
    generated_tokens.push_back(std::move(cand));
  }
  const double count = static_cast<double>(items.size());
  report.bleu /= count;
  report.rouge_l /= count;
  report.gen_len /= count;

  std::vector<Tokens> training_tokens;
  training_tokens.reserve(training_texts.size());
  for (const std::string& text : training_texts) training_tokens.push_back(tokenize(text));
  report.novelty = novelty(generated_tokens, training_tokens, novelty_n);
  return report;
}

}  // namespace csgen::metrics
