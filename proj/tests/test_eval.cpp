#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "gtr/eval.hpp"

using namespace gtr;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::Malformed;
}

using Tokens = std::vector<std::string>;

std::map<Tokens, int> grams(const Tokens& t, std::size_t n) {
  std::map<Tokens, int> out;
  for (std::size_t i = 0; i + n <= t.size(); ++i) ++out[Tokens(t.begin() + i, t.begin() + i + n)];
  return out;
}

double f1(double overlap, double p_total, double g_total) {
  if (overlap == 0) return 0;
  double p = overlap / p_total, r = overlap / g_total;
  return 100 * 2 * p * r / (p + r);
}

double ngram_f1(const Tokens& p, const Tokens& g, std::size_t n) {
  auto a = grams(p, n), b = grams(g, n);
  double overlap = 0, pa = 0, gb = 0;
  for (const auto& [k, c] : a) {
    pa += c;
    if (b.count(k)) overlap += std::min(c, b[k]);
  }
  for (const auto& [k, c] : b) gb += c;
  return f1(overlap, pa, gb);
}

// Longest common subsequence by memoized recursion.
int lcs(const Tokens& a, const Tokens& b, std::size_t i, std::size_t j, std::map<std::pair<std::size_t, std::size_t>, int>& memo) {
  if (i == a.size() || j == b.size()) return 0;
  auto key = std::make_pair(i, j);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  int v = a[i] == b[j] ? 1 + lcs(a, b, i + 1, j + 1, memo)
                       : std::max(lcs(a, b, i + 1, j, memo), lcs(a, b, i, j + 1, memo));
  return memo[key] = v;
}

double bleu_oracle(const std::vector<Tokens>& preds, const std::vector<Tokens>& golds, double* bp_out) {
  double c = 0, r = 0;
  double log_sum = 0;
  int orders = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    double match = 0, total = 0;
    for (std::size_t k = 0; k < preds.size(); ++k) {
      auto a = grams(preds[k], n), b = grams(golds[k], n);
      for (const auto& [g, cnt] : a) {
        total += cnt;
        if (b.count(g)) match += std::min(cnt, b[g]);
      }
    }
    if (total == 0) continue;
    if (match == 0) return 0;
    log_sum += std::log(match / total);
    ++orders;
  }
  for (std::size_t k = 0; k < preds.size(); ++k) {
    c += preds[k].size();
    r += golds[k].size();
  }
  double bp = c == 0 ? 0 : (c < r ? std::exp(1 - r / c) : 1.0);
  if (bp_out) *bp_out = bp;
  return orders ? 100 * bp * std::exp(log_sum / orders) : 0;
}

Tokens random_tokens(std::mt19937& rng) {
  static const Tokens vocab = {"the", "cat", "sat", "on", "mat", "graph", "node", "is", "a", "of"};
  Tokens t(std::uniform_int_distribution<int>(1, 12)(rng));
  for (auto& w : t) w = vocab[rng() % vocab.size()];
  return t;
}

std::string join(const Tokens& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? " " : "") + t[i];
  return s;
}

}  // namespace

TEST_CASE("tokenization") {
  CHECK(eval::tokenize("The lollipop-graph's ORDER is 10.") ==
        Tokens{"the", "lollipop", "graph", "s", "order", "is", "10"});
  CHECK(eval::tokenize("") .empty());
  CHECK(eval::tokenize("café au lait") == Tokens{"café", "au", "lait"});
}

TEST_CASE("the cat against the cat sat") {
  auto s = eval::rouge("the cat", "the cat sat");
  CHECK(s.rouge1 == doctest::Approx(80.0).epsilon(1e-6));
  CHECK(std::fabs(s.rouge1 - 80.0) < 0.01);
  CHECK(s.rouge2 == doctest::Approx(100.0 * 2 * 1.0 * 0.5 / 1.5));
  CHECK(s.rougeL == doctest::Approx(80.0));
}

TEST_CASE("identical corpora score 100 everywhere") {
  std::vector<std::string> golds = {
      "The radius of the lollipop graph is [GR(GL(\"gpr\", {\"lollipop_graph\"}), \"toolx:radius\")-->r].",
      "There exist [GR(GL(\"gpr\", {\"lollipop_graph\"}), \"toolx:order\")-->r] nodes in the lollipop graph.",
      "Short.",
  };
  auto report = eval::evaluate(golds, golds);
  CHECK(report.rouge1 == doctest::Approx(100.0));
  CHECK(report.rouge2 == doctest::Approx(100.0));
  CHECK(report.rougeL == doctest::Approx(100.0));
  CHECK(report.rougeLsum == doctest::Approx(100.0));
  CHECK(report.bleu == doctest::Approx(100.0));
  CHECK(report.bp == doctest::Approx(1.0));
  CHECK(report.api_accuracy == doctest::Approx(100.0));
  CHECK(report.n == 3);
  auto j = eval::report_to_json(report);
  CHECK(j["bleu"].get<double>() == doctest::Approx(100.0));
}

TEST_CASE("brevity penalty for a half-length candidate") {
  auto b = eval::bleu({"a b c d"}, {"a b c d a b c d"});
  CHECK(b.bp == doctest::Approx(std::exp(-1.0)));
  CHECK(b.bleu == doctest::Approx(100.0 * std::exp(-1.0)));
  CHECK(eval::bleu({"x y"}, {"a b"}).bleu == 0.0);
  CHECK(code_of([] { eval::bleu({"a"}, {}); }) == ErrorCode::LengthMismatch);
  CHECK(code_of([] { eval::api_accuracy({"a"}, {"a", "b"}); }) == ErrorCode::LengthMismatch);
}

TEST_CASE("rouge and bleu agree with independent oracles on random text") {
  std::mt19937 rng(31);
  std::vector<Tokens> preds, golds;
  for (int trial = 0; trial < 300; ++trial) {
    auto p = random_tokens(rng), g = random_tokens(rng);
    preds.push_back(p);
    golds.push_back(g);
    auto s = eval::rouge(join(p), join(g));
    CAPTURE(join(p));
    CAPTURE(join(g));
    CHECK(s.rouge1 == doctest::Approx(ngram_f1(p, g, 1)));
    if (p.size() >= 2 && g.size() >= 2) CHECK(s.rouge2 == doctest::Approx(ngram_f1(p, g, 2)));
    std::map<std::pair<std::size_t, std::size_t>, int> memo;
    double l = lcs(p, g, 0, 0, memo);
    CHECK(s.rougeL == doctest::Approx(f1(l, p.size(), g.size())));
    CHECK(s.rougeLsum == doctest::Approx(s.rougeL));  // single line

    auto swapped = eval::rouge(join(g), join(p));
    CHECK(swapped.rouge1 == doctest::Approx(s.rouge1));
    CHECK(swapped.rougeL == doctest::Approx(s.rougeL));
  }
  std::vector<std::string> ps, gs;
  for (std::size_t k = 0; k < preds.size(); ++k) {
    ps.push_back(join(preds[k]));
    gs.push_back(join(golds[k]));
  }
  double bp = 0;
  double expected = bleu_oracle(preds, golds, &bp);
  auto b = eval::bleu(ps, gs);
  CHECK(b.bleu == doctest::Approx(expected));
  CHECK(b.bp == doctest::Approx(bp));

  // corpus scores do not depend on pair order
  std::vector<std::size_t> idx(ps.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<std::string> ps2, gs2;
  for (auto i : idx) {
    ps2.push_back(ps[i]);
    gs2.push_back(gs[i]);
  }
  CHECK(eval::bleu(ps2, gs2).bleu == doctest::Approx(b.bleu));
  auto r1 = eval::evaluate(ps, gs), r2 = eval::evaluate(ps2, gs2);
  CHECK(r1.rouge1 == doctest::Approx(r2.rouge1));
  CHECK(r1.rougeLsum == doctest::Approx(r2.rougeLsum));
  CHECK(r1.api_accuracy == r2.api_accuracy);
}

TEST_CASE("summary-level LCS over lines") {
  // union LCS: line "a b" hits a b, line "c d" hits c d -> 4 of 4
  auto s = eval::rouge("a b\nc d", "c d\na b");
  CHECK(s.rougeLsum == doctest::Approx(100.0));
  CHECK(s.rougeL < 100.0);
}

TEST_CASE("empty sides") {
  CHECK(eval::rouge("", "").rouge1 == 100.0);
  CHECK(eval::rouge("a", "a").rouge2 == 100.0);  // no bigrams on either side
  CHECK(eval::rouge("a", "b").rouge2 == 0.0);
  CHECK(eval::rouge("", "x").rouge1 == 0.0);
}

TEST_CASE("api accuracy on the failure-analysis pairs") {
  const std::string gen1 =
      "root>'s eccentricity is [GR(GL(\"gpr\", {\"lollipop_graph\"}), \"toolx:eccentricity\", <root>)-->r].root>'s "
      "eccentricity is [GR(GL(\"gpr\", {\"lollipop_graph\"}), \"toolx:eccentricity\", <root>)-->r1].root>'s "
      "eccentricity is [GR(GL(\"gpr";
  const std::string gold1 =
      "Nodes [GR(GL(\"gpr\", {\"lollipop_graph\"}), \"toolx:periphery\")-->r] have the largest eccentricity "
      "[GR(GL(\"gpr\", {\"lollipop_graph\"}), \"toolx:eccentricity\")] in the lollipop graph, which make them part of "
      "its periphery.";
  CHECK_FALSE(eval::same_calls(gen1, gold1));
  CHECK(eval::api_accuracy({gen1}, {gold1}) == 0.0);

  const std::string gen_house =
      "center>the nodes with the smallest eccentricity in the house x graph are [GR(GL(\"gpr\", {\"house_x_graph\"}), "
      "\"toolx:eccentricity\")-->r], which are also the [GR(GL(\"gpr\", {\"house_x_graph\"}), \"toolx:center\")-->r].";
  const std::string gold_house =
      "The nodes with the smallest eccentricity [GR(GL(\"gpr\", {\"house_x_graph\"}), \"toolx:eccentricity\")] in the "
      "house x graph are [GR(GL(\"gpr\", {\"house_x_graph\"}), \"toolx:center\")-->r], which are also the center of the tree.";
  CHECK_FALSE(eval::same_calls(gen_house, gold_house));

  std::vector<std::pair<std::string, std::string>> matching = {
      {"The length of shortest path between node #3 and node #2 in the diamond graph is [GR(GL(\"gpr\", "
       "{\"diamond_graph\"}), \"toolx:shortest_path\", \"node#3\", \"node#2\")-->r].",
       "In the diamond graph, the length of shortest path between node #3 and node #2 is [GR(GL(\"gpr\", "
       "{\"diamond_graph\"}), \"toolx:shortest_path\", \"node#3\", \"node#2\")-->r]."},
      {"ROOT>'s cora bibliographic network' paper #28487 is concerned with the area of [GR(GL(\"cora\"), "
       "\"graph_bert:topic\", paper#28487)-->r].",
       "The cora bibliographic network' paper #28487 is concerned with the area of [GR(GL(\"cora\"), "
       "\"graph_bert:topic\", paper#28487)-->r]."},
      {"The function of the protein molecular graph #573 in proteins is [GR(GL(\"proteins\"), "
       "\"seg_bert:molecule_function\", instance#573)-->r].",
       "The function for the protein molecular graph #573 in proteins is [GR(GL(\"proteins\"), "
       "\"seg_bert:molecule_function\", instance#573)-->r]."},
      {"In Amazon, what is the item that user #A3C08BZRVV500V will be most likely to purchase next is "
       "[GR(GL(\"amazon\"), \"bpr:topk_recommendation\", user#A3C08BZRVV500V, 1)-->r].",
       "In Amazon, the item that user #A3C08BZRVV500V will be most likely to purchase next is [GR(GL(\"amazon\"), "
       "\"bpr:topk_recommendation\", user#A3C08BZRVV500V, 1)-->r]."},
  };
  std::vector<std::string> ps, gs;
  for (const auto& [p, g] : matching) {
    CAPTURE(p);
    CHECK(eval::same_calls(p, g));
    CHECK(eval::api_accuracy({p}, {g}) == 100.0);
    ps.push_back(p);
    gs.push_back(g);
  }

  const std::string gen_pubmed =
      "The topic of paper #paper_number> in the pubmed bibliographic network is [GR(GL(\"pubmed\"), "
      "\"graph_bert:topic\", paper#paper_number>)-->r].";
  const std::string gold_pubmed =
      "The topic of paper #5832 in the pubmed bibliographic network is [GR(GL(\"pubmed\"), \"graph_bert:topic\", "
      "paper#5832)-->r].";
  CHECK_FALSE(eval::same_calls(gen_pubmed, gold_pubmed));
  const std::string gen_ml = "In Movielens, which movie user #u273 will be most likely to watch next?";
  const std::string gold_ml =
      "In Movielens, the movie that user #u273 will be most likely to watch next is [GR(GL(\"movielens\"), "
      "\"bpr:topk_recommendation\", user#u273, 1)-->r].";
  CHECK_FALSE(eval::same_calls(gen_ml, gold_ml));

  ps.insert(ps.end(), {gen1, gen_pubmed, gen_ml, gen_house});
  gs.insert(gs.end(), {gold1, gold_pubmed, gold_ml, gold_house});
  CHECK(eval::api_accuracy(ps, gs) == doctest::Approx(50.0));
}

TEST_CASE("call comparison ignores spacing, name case and result names") {
  CHECK(eval::same_calls("x [gr(gl(\"cora\"),\"graph_bert:topic\",paper#1)-->r1] y",
                         "[GR(GL(\"cora\"), \"graph_bert:topic\", paper#1)-->r]"));
  CHECK_FALSE(eval::same_calls("[GR(GL(\"cora\"), \"graph_bert:topic\", paper#1)]",
                               "[GR(GL(\"cora\"), \"graph_bert:topic\", paper#1)-->r]"));
  CHECK(eval::same_calls("no calls", "none here either"));
}
