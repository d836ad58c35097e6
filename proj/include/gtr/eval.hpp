#pragma once

// Generation metrics: Rouge-1/2/L/LSum F1, corpus BLEU with brevity
// penalty, and API call accuracy.
//
// Tokenization: lowercase ASCII, split on every byte that is not [a-z0-9];
// bytes >= 0x80 count as word characters so UTF-8 words stay whole.
// BLEU is unsmoothed: a zero n-gram precision gives 0.

#include <string>
#include <string_view>
#include <vector>

#include "gtr/graph_store.hpp"

namespace gtr::eval {

std::vector<std::string> tokenize(std::string_view text);

/// Percent F1 scores for one prediction/reference pair.
struct RougeScores {
  double rouge1 = 0, rouge2 = 0, rougeL = 0, rougeLsum = 0;
};

/// Both sides empty (no n-grams of that order) scores 100 when the token
/// sequences are equal, else 0.
RougeScores rouge(std::string_view pred, std::string_view gold);

struct BleuScore {
  double bleu = 0;  // percent
  double bp = 0;
  std::vector<double> precisions;  // modified precision per order actually used
};

/// Corpus BLEU up to 4-grams with uniform weights. Orders longer than every
/// candidate are left out of the geometric mean. BP = exp(1 - r/c) for c < r.
/// Throws LengthMismatch.
BleuScore bleu(const std::vector<std::string>& preds, const std::vector<std::string>& golds);

/// Call sequences of the two statements, canonicalized (case of names,
/// spacing and result names ignored). An unparseable statement never matches.
bool same_calls(std::string_view pred, std::string_view gold);

/// Percentage of pairs with matching call sequences. Throws LengthMismatch.
double api_accuracy(const std::vector<std::string>& preds, const std::vector<std::string>& golds);

struct MetricReport {
  double rouge1 = 0, rouge2 = 0, rougeL = 0, rougeLsum = 0;  // mean per-pair F1, percent
  double bleu = 0;
  double bp = 0;
  double api_accuracy = 0;
  std::size_t n = 0;
};

MetricReport evaluate(const std::vector<std::string>& preds, const std::vector<std::string>& golds);

Json report_to_json(const MetricReport& report);

}  // namespace gtr::eval
