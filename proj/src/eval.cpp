#include "gtr/eval.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>

#include "gtr/dsl.hpp"

namespace gtr::eval {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c >= 0x80) {
      cur += static_cast<char>(std::tolower(c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

namespace {

using Tokens = std::vector<std::string>;
using Counts = std::map<Tokens, long>;

Counts ngrams(const Tokens& t, std::size_t n) {
  Counts out;
  for (std::size_t i = 0; i + n <= t.size(); ++i) ++out[Tokens(t.begin() + i, t.begin() + i + n)];
  return out;
}

long total(const Counts& c) {
  long s = 0;
  for (const auto& [_, k] : c) s += k;
  return s;
}

long clipped_overlap(const Counts& cand, const Counts& ref) {
  long s = 0;
  for (const auto& [g, k] : cand) {
    auto it = ref.find(g);
    if (it != ref.end()) s += std::min(k, it->second);
  }
  return s;
}

double f1(double hits, double pred_len, double gold_len) {
  if (hits <= 0 || pred_len <= 0 || gold_len <= 0) return 0.0;
  double p = hits / pred_len, r = hits / gold_len;
  return 100.0 * 2 * p * r / (p + r);
}

double ngram_f1(const Tokens& pred, const Tokens& gold, std::size_t n) {
  auto a = ngrams(pred, n), b = ngrams(gold, n);
  auto na = total(a), nb = total(b);
  if (na == 0 && nb == 0) return pred == gold ? 100.0 : 0.0;
  return f1(static_cast<double>(clipped_overlap(a, b)), na, nb);
}

std::vector<std::vector<int>> lcs_table(const Tokens& a, const Tokens& b) {
  std::vector<std::vector<int>> t(a.size() + 1, std::vector<int>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      t[i][j] = a[i - 1] == b[j - 1] ? t[i - 1][j - 1] + 1 : std::max(t[i - 1][j], t[i][j - 1]);
    }
  }
  return t;
}

// Positions of `ref` covered by one LCS with `cand`.
std::vector<std::size_t> lcs_positions(const Tokens& ref, const Tokens& cand) {
  auto t = lcs_table(ref, cand);
  std::vector<std::size_t> out;
  std::size_t i = ref.size(), j = cand.size();
  while (i > 0 && j > 0) {
    if (ref[i - 1] == cand[j - 1]) {
      out.push_back(i - 1);
      --i;
      --j;
    } else if (t[i - 1][j] >= t[i][j - 1]) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<Tokens> line_tokens(std::string_view text) {
  std::vector<Tokens> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto t = tokenize(text.substr(start, end - start));
    if (!t.empty()) out.push_back(std::move(t));
    start = end + 1;
  }
  return out;
}

// Summary-level LCS: union of per-line LCS hits, clipped by token counts.
double lsum_f1(std::string_view pred, std::string_view gold) {
  auto preds = line_tokens(pred), golds = line_tokens(gold);
  std::map<std::string, long> pred_count, gold_count;
  long pred_len = 0, gold_len = 0;
  for (const auto& l : preds) {
    for (const auto& w : l) ++pred_count[w];
    pred_len += static_cast<long>(l.size());
  }
  for (const auto& l : golds) {
    for (const auto& w : l) ++gold_count[w];
    gold_len += static_cast<long>(l.size());
  }
  if (pred_len == 0 && gold_len == 0) return 100.0;
  long hits = 0;
  for (const auto& ref : golds) {
    std::vector<bool> covered(ref.size(), false);
    for (const auto& cand : preds) {
      for (auto p : lcs_positions(ref, cand)) covered[p] = true;
    }
    for (std::size_t k = 0; k < ref.size(); ++k) {
      if (!covered[k]) continue;
      auto& pc = pred_count[ref[k]];
      auto& gc = gold_count[ref[k]];
      if (pc > 0 && gc > 0) {
        ++hits;
        --pc;
        --gc;
      }
    }
  }
  return f1(static_cast<double>(hits), pred_len, gold_len);
}

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(a) + " predictions but " + std::to_string(b) + " references");
  }
}

}  // namespace

RougeScores rouge(std::string_view pred, std::string_view gold) {
  auto p = tokenize(pred), g = tokenize(gold);
  RougeScores s;
  s.rouge1 = ngram_f1(p, g, 1);
  s.rouge2 = ngram_f1(p, g, 2);
  if (p.empty() && g.empty()) {
    s.rougeL = 100.0;
  } else {
    s.rougeL = f1(lcs_table(p, g)[p.size()][g.size()], static_cast<double>(p.size()), static_cast<double>(g.size()));
  }
  s.rougeLsum = lsum_f1(pred, gold);
  return s;
}

BleuScore bleu(const std::vector<std::string>& preds, const std::vector<std::string>& golds) {
  check_lengths(preds.size(), golds.size());
  std::array<long, 4> matched{}, possible{};
  long c = 0, r = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    auto p = tokenize(preds[i]), g = tokenize(golds[i]);
    c += static_cast<long>(p.size());
    r += static_cast<long>(g.size());
    for (std::size_t n = 1; n <= 4; ++n) {
      auto cn = ngrams(p, n);
      matched[n - 1] += clipped_overlap(cn, ngrams(g, n));
      possible[n - 1] += total(cn);
    }
  }
  BleuScore out;
  if (c == 0) return out;
  out.bp = c < r ? std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c)) : 1.0;
  double log_sum = 0;
  for (std::size_t n = 0; n < 4 && possible[n] > 0; ++n) {
    double p = static_cast<double>(matched[n]) / static_cast<double>(possible[n]);
    out.precisions.push_back(p);
    if (p == 0) return out;
    log_sum += std::log(p);
  }
  out.bleu = 100.0 * out.bp * std::exp(log_sum / static_cast<double>(out.precisions.size()));
  return out;
}

bool same_calls(std::string_view pred, std::string_view gold) {
  auto calls = [](std::string_view text) {
    std::vector<std::string> out;
    for (const auto& q : dsl::extract_queries(dsl::parse(text, dsl::ParseMode::Strict).statement)) {
      out.push_back(dsl::canonicalize(q.call));
    }
    return out;
  };
  try {
    return calls(pred) == calls(gold);
  } catch (const dsl::ParseError&) {
    return false;
  }
}

double api_accuracy(const std::vector<std::string>& preds, const std::vector<std::string>& golds) {
  check_lengths(preds.size(), golds.size());
  if (preds.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) hits += same_calls(preds[i], golds[i]) ? 1 : 0;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(preds.size());
}

MetricReport evaluate(const std::vector<std::string>& preds, const std::vector<std::string>& golds) {
  check_lengths(preds.size(), golds.size());
  MetricReport m;
  m.n = preds.size();
  if (m.n == 0) return m;
  for (std::size_t i = 0; i < m.n; ++i) {
    auto s = rouge(preds[i], golds[i]);
    m.rouge1 += s.rouge1;
    m.rouge2 += s.rouge2;
    m.rougeL += s.rougeL;
    m.rougeLsum += s.rougeLsum;
  }
  const double n = static_cast<double>(m.n);
  m.rouge1 /= n;
  m.rouge2 /= n;
  m.rougeL /= n;
  m.rougeLsum /= n;
  auto b = bleu(preds, golds);
  m.bleu = b.bleu;
  m.bp = b.bp;
  m.api_accuracy = api_accuracy(preds, golds);
  return m;
}

Json report_to_json(const MetricReport& r) {
  Json j;
  j["rouge1"] = r.rouge1;
  j["rouge2"] = r.rouge2;
  j["rougeL"] = r.rougeL;
  j["rougeLsum"] = r.rougeLsum;
  j["bleu"] = r.bleu;
  j["bp"] = r.bp;
  j["api_accuracy"] = r.api_accuracy;
  j["n"] = r.n;
  return j;
}

}  // namespace gtr::eval
