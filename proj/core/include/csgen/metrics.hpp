#pragma once

#include <span>
#include <string>
#include <vector>

#include "csgen/types.hpp"

namespace csgen::metrics {

using Tokens = std::vector<std::string>;

/// Sentence BLEU: geometric mean of modified n-gram precisions (n = 1..max_n)
/// times the brevity penalty. Precisions for n >= 2 are add-one smoothed;
/// unigram precision is not, so zero overlap still scores 0. The effective
/// reference length is the closest to the candidate's (ties to the shorter).
/// An empty candidate scores 0 with a warning.
double bleu(std::span<const std::string> candidate, std::span<const Tokens> references,
            int max_n = 4);

/// ROUGE-L F1: longest common subsequence, P = LCS/|candidate|,
/// R = LCS/|reference|, F = 2PR/(P+R). Empty input scores 0 with a warning.
double rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference);

/// Share of the generated corpus's repeated n-grams that never occur in the
/// training corpus: collect n-grams over all generated texts, keep those
/// appearing at least twice (non-singletons), and return the fraction of the
/// distinct survivors absent from the training n-gram set. 0 with a warning
/// when nothing repeats.
double novelty(std::span<const Tokens> generated, std::span<const Tokens> training_corpus,
               int n = 2);

/// Mean token count of the generated texts.
double gen_len(std::span<const Tokens> generated);

struct ItemMetrics {
  std::string id;
  double bleu = 0.0;
  double rouge_l = 0.0;
  double gen_len = 0.0;
};

/// Aggregate report. bleu/rouge_l/gen_len are means of the per_item values;
/// novelty is corpus-level by definition (repetition is counted across
/// texts), so it has no per-item decomposition.
struct MetricReport {
  double bleu = 0.0;
  double rouge_l = 0.0;
  double novelty = 0.0;
  double gen_len = 0.0;
  std::vector<ItemMetrics> per_item;
};

struct EvalItem {
  std::string id;
  std::string candidate;
  std::string reference;
};

/// Tokenizes with the shared rule and computes the full report. Every item
/// needs a non-empty reference; novelty compares against training_texts.
MetricReport evaluate(std::span<const EvalItem> items,
                      std::span<const std::string> training_texts, int bleu_max_n = 4,
                      int novelty_n = 2);

}  // namespace csgen::metrics
