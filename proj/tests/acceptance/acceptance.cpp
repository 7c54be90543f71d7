// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "support/synthetic.hpp"
#include "talkmine/analysis.hpp"
#include "talkmine/elastic_net.hpp"
#include "talkmine/log.hpp"
#include "talkmine/pipeline.hpp"
#include "talkmine/preprocess.hpp"
#include "talkmine/sentiment.hpp"
#include "talkmine/topics.hpp"

namespace fs = std::filesystem;
using namespace talkmine;
using namespace talkmine::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1 --------------------------------------------------------------------------
Outcome lda_synthetic_recovery() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto data = make_disjoint_lda(500, 200, 5, 0.1, 80, 120, 7);
  LdaConfig cfg;
  cfg.num_topics = 5;
  cfg.alpha = 0.1;
  cfg.beta = 0.01;
  cfg.iterations = 2000;
  cfg.burn_in = 500;
  cfg.seed = 11;
  const auto model = fit_lda(data.dtm, data.terms, cfg);
  const double secs = seconds_since(t0);
  const auto d = aligned_distances(data.phi, model);
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / d.size();
  o.detail = "mean TV " + fmt("%.4f", mean) + ", " + fmt("%.1f", secs) + " s";
  if (mean > 0.15) o.pass = false;
  if (secs > 60.0) o.pass = false;
  return o;
}

// 2 --------------------------------------------------------------------------
Outcome lda_single_topic() {
  Outcome o;
  Rng rng(21);
  const auto dtm = random_counts(rng, 12, 15, 0.4);
  std::vector<std::string> terms;
  for (std::size_t v = 0; v < 15; ++v) terms.push_back("t" + std::to_string(v));
  LdaConfig cfg;
  cfg.num_topics = 1;
  cfg.iterations = 50;
  cfg.burn_in = 10;
  cfg.seed = 3;
  const auto model = fit_lda(dtm, terms, cfg);

  for (std::size_t d = 0; d < model.num_docs(); ++d) o.check(model.theta_row(d)[0] == 1.0, "theta != 1");

  std::vector<double> freq(15, 0.0);
  double total = 0.0;
  for (std::size_t r = 0; r < dtm.num_rows(); ++r) {
    const auto cols = dtm.row_cols(r);
    const auto vals = dtm.row_vals(r);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      freq[cols[i]] += vals[i];
      total += vals[i];
    }
  }
  double worst = 0.0;
  for (std::size_t v = 0; v < 15; ++v) {
    const double expected = (freq[v] + cfg.beta) / (total + 15 * cfg.beta);
    worst = std::max(worst, std::abs(model.phi_row(0)[v] - expected));
  }
  o.check(worst <= 1e-12, "phi error " + fmt("%.3g", worst));
  if (o.pass) o.detail = "max phi error " + fmt("%.3g", worst);
  return o;
}

// 3 --------------------------------------------------------------------------
bool counts_consistent(const GibbsSampler& s) {
  const std::size_t K = s.num_topics();
  const std::size_t V = s.num_terms();
  std::vector<std::uint32_t> nd(s.num_docs() * K, 0);
  std::vector<std::uint32_t> nkv(K * V, 0);
  std::vector<std::uint32_t> nk(K, 0);
  for (std::size_t d = 0; d < s.num_docs(); ++d) {
    for (std::size_t i = 0; i < s.tokens()[d].size(); ++i) {
      const auto k = s.assignments()[d][i];
      const auto w = s.tokens()[d][i];
      ++nd[d * K + k];
      ++nkv[k * V + w];
      ++nk[k];
    }
  }
  return nd == s.doc_topic() && nkv == s.topic_word() && nk == s.topic_totals();
}

Outcome gibbs_invariants() {
  Outcome o;
  Rng rng(99);
  std::size_t sweeps_checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t docs = 1 + rng.uniform_index(50);
    const std::size_t vocab = 2 + rng.uniform_index(30);
    const auto dtm = random_counts(rng, docs, vocab, 0.3);
    std::vector<std::string> terms;
    for (std::size_t v = 0; v < vocab; ++v) terms.push_back("t" + std::to_string(v));
    LdaConfig cfg;
    cfg.num_topics = 1 + rng.uniform_index(6);
    cfg.iterations = 30;
    cfg.burn_in = 5;
    cfg.seed = rng.next();

    bool ok = true;
    const auto model = fit_lda(dtm, terms, cfg, [&](const GibbsSampler& s, std::size_t) {
      ok = ok && counts_consistent(s);
      ++sweeps_checked;
    });
    o.check(ok, "count identity broken in trial " + std::to_string(trial));
    for (std::size_t d = 0; d < model.num_docs(); ++d) {
      const auto row = model.theta_row(d);
      o.check(std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0) <= 1e-9, "theta row sum");
    }
    for (std::size_t k = 0; k < model.num_topics(); ++k) {
      const auto row = model.phi_row(k);
      o.check(std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0) <= 1e-9, "phi row sum");
    }
    const auto again = fit_lda(dtm, terms, cfg);
    o.check(model == again && model_to_json(model) == model_to_json(again), "fixed seed not reproducible");
  }
  if (o.pass) o.detail = std::to_string(sweeps_checked) + " sweeps checked";
  return o;
}

// 4 --------------------------------------------------------------------------
Outcome gibbs_conditional_oracle() {
  Outcome o;
  // doc0 = w0 w0 w1, doc1 = w1 w2 w2; K = 2, alpha = 0.5, beta = 0.1.
  const auto dtm = DocTermMatrix::from_dense({{2, 1, 0}, {0, 1, 2}}, 3);
  LdaConfig cfg;
  cfg.num_topics = 2;
  cfg.alpha = 0.5;
  cfg.beta = 0.1;
  const GibbsSampler s(dtm, cfg, {{0, 1, 0}, {1, 1, 0}});
  // Counts: n_d0 = (2,1), n_d1 = (1,2); every n_kv = 1; n_k = (3,3); V*beta = 0.3.
  // Table entries: (n_dk - self + a)(n_kw - self + b)/(n_k - self + Vb).
  const std::vector<std::vector<std::vector<double>>> table{
      {{1.5 * 0.1 / 2.3, 1.5 * 1.1 / 3.3},    // d0 w0 z0
       {2.5 * 1.1 / 3.3, 0.5 * 0.1 / 2.3},    // d0 w0 z1
       {1.5 * 0.1 / 2.3, 1.5 * 1.1 / 3.3}},   // d0 w1 z0
      {{1.5 * 1.1 / 3.3, 1.5 * 0.1 / 2.3},    // d1 w1 z1
       {1.5 * 1.1 / 3.3, 1.5 * 0.1 / 2.3},    // d1 w2 z1
       {0.5 * 0.1 / 2.3, 2.5 * 1.1 / 3.3}}};  // d1 w2 z0
  double worst = 0.0;
  for (std::size_t d = 0; d < 2; ++d) {
    for (std::size_t i = 0; i < 3; ++i) {
      const auto c = s.conditional(d, i);
      for (std::size_t k = 0; k < 2; ++k) worst = std::max(worst, std::abs(c[k] - table[d][i][k]));
    }
  }
  o.check(worst <= 1e-12, "max error " + fmt("%.3g", worst));
  if (o.pass) o.detail = "max error " + fmt("%.3g", worst);
  return o;
}

// 5 --------------------------------------------------------------------------
Outcome tfidf_brute_force() {
  Outcome o;
  Rng rng(5);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + rng.uniform_index(20);
    const std::size_t cols = 1 + rng.uniform_index(20);
    const auto dtm = random_counts(rng, rows, cols, rng.uniform01());
    const auto got = tfidf(dtm).dense();
    const auto want = brute_tfidf(dtm.dense());
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) worst = std::max(worst, std::abs(got[i][j] - want[i][j]));
    }
  }
  o.check(worst <= 1e-12, "max diff " + fmt("%.3g", worst));

  // Column 1 occurs in every document.
  const auto m = tfidf(DocTermMatrix::from_dense({{1, 3, 0}, {0, 1, 2}, {4, 2, 0}}, 3)).dense();
  for (const auto& row : m) o.check(row[1] == 0.0, "all-document term has non-zero weight");
  if (o.pass) o.detail = "max diff " + fmt("%.3g", worst);
  return o;
}

// 6 --------------------------------------------------------------------------
Outcome log_odds_conformance() {
  Outcome o;
  struct Row {
    std::uint64_t pos, neg;
    double want;
  };
  // Raw counts; the function smooths by one before the branch table.
  const Row rows[] = {{0, 0, 0.0},     {7, 7, 0.0},      {3, 1, 2.0},   {1, 3, -2.0},  {5, 0, 6.0},
                      {0, 5, -6.0},    {500, 0, 10.0},   {0, 500, -10.0}, {9, 0, 10.0}, {0, 9, -10.0},
                      {10, 0, 10.0},   {2, 5, -2.0}};
  for (const auto& r : rows) {
    const double got = log_odds(r.pos, r.neg);
    o.check(got == r.want, "log_odds(" + std::to_string(r.pos) + "," + std::to_string(r.neg) + ") = " +
                               fmt("%.17g", got));
  }
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    const auto a = rng.uniform_index(1000);
    const auto b = rng.uniform_index(1000);
    const double x = log_odds(a, b);
    o.check(x == -log_odds(b, a), "antisymmetry");
    o.check(x >= -10.0 && x <= 10.0, "range");
    o.check(log_odds(a, a) == 0.0, "equal counts");
  }
  if (o.pass) o.detail = "12 table rows, 1000 random pairs";
  return o;
}

// 7 --------------------------------------------------------------------------
struct RandomProblem {
  LogisticElasticNet net;
  std::size_t p;
};

RandomProblem random_problem(Rng& rng, std::size_t n, std::size_t p) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(p, 0.0));
  std::vector<double> y(n);
  std::vector<double> w(n);
  std::vector<double> truth(p);
  for (auto& t : truth) t = 2.0 * standard_normal(rng);
  for (std::size_t i = 0; i < n; ++i) {
    double eta = 0.3;
    for (std::size_t j = 0; j < p; ++j) {
      if (rng.uniform01() < 0.6) rows[i][j] = standard_normal(rng);
      eta += truth[j] * rows[i][j];
    }
    y[i] = rng.uniform01() < logistic(eta) ? 1.0 : 0.0;
    w[i] = 0.5 + rng.uniform01();
  }
  return {LogisticElasticNet(DesignMatrix::from_dense(rows), y, w), p};
}

bool monotone(const std::vector<double>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i] > trace[i - 1] + 1e-12 * std::abs(trace[i - 1])) return false;
  }
  return true;
}

// Minimizer of a/2 w^2 - b w + lam (mix |w| + (1-mix)/2 w^2), two ways:
// the textbook soft-threshold closed form, and bisection on the subgradient.
double soft_threshold_closed_form(double a, double b, double lam, double mix) {
  const double shrunk = std::max(std::abs(b) - lam * mix, 0.0);
  return (b < 0 ? -shrunk : shrunk) / (a + lam * (1 - mix));
}

double subgradient_root(double a, double b, double lam, double mix) {
  auto g = [&](double w) {
    const double sign = w > 0 ? 1.0 : (w < 0 ? -1.0 : 0.0);
    return (a + lam * (1 - mix)) * w - b + lam * mix * sign;
  };
  double lo = -1e3;
  double hi = 1e3;
  for (int i = 0; i < 4000; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (g(mid) > 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

Outcome elastic_net_correctness() {
  Outcome o;
  Rng rng(7);
  std::size_t fits = 0;

  // (a)
  for (int trial = 0; trial < 10; ++trial) {
    const auto prob = random_problem(rng, 40, 6);
    for (double mix : {1.0, 0.5, 0.1}) {
      const double lmax = prob.net.lambda_max(mix);
      for (double scale : {1.0, 1.5, 10.0}) {
        const auto fit = prob.net.fit(lmax * scale, mix);
        ++fits;
        o.check(std::all_of(fit.coef.weights.begin(), fit.coef.weights.end(), [](double v) { return v == 0.0; }),
                "(a) non-zero weight at lambda >= lambda_max");
        o.check(monotone(fit.objective_trace), "(d) objective increased");
      }
    }
  }

  // (b)
  double worst_b = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double a = 0.05 + 3 * rng.uniform01();
    const double b = 4 * (rng.uniform01() - 0.5);
    const double lam = 2 * rng.uniform01();
    const double mix = rng.uniform01();
    const double got = coordinate_update(b, a, lam, mix);
    worst_b = std::max(worst_b, std::abs(got - soft_threshold_closed_form(a, b, lam, mix)));
    worst_b = std::max(worst_b, std::abs(got - subgradient_root(a, b, lam, mix)));
  }
  o.check(worst_b <= 1e-10, "(b) univariate error " + fmt("%.3g", worst_b));

  // (c)
  double worst_c = 0.0;
  {
    const auto prob = random_problem(rng, 30, 5);
    for (int point = 0; point < 10; ++point) {
      Coefficients c;
      for (std::size_t j = 0; j < prob.p; ++j) c.weights.push_back(standard_normal(rng));
      c.intercept = standard_normal(rng);
      const double lam = 0.3 * rng.uniform01();
      const double mix = rng.uniform01();
      const auto g = prob.net.smooth_gradient(c, lam, mix);
      for (std::size_t j = 0; j <= prob.p; ++j) {
        const double h = 1e-5;
        auto up = c;
        auto dn = c;
        (j < prob.p ? up.weights[j] : up.intercept) += h;
        (j < prob.p ? dn.weights[j] : dn.intercept) -= h;
        const double fd = (prob.net.smooth_objective(up, lam, mix) - prob.net.smooth_objective(dn, lam, mix)) / (2 * h);
        worst_c = std::max(worst_c, std::abs(g[j] - fd) / std::max({std::abs(g[j]), std::abs(fd), 1e-3}));
      }
    }
  }
  o.check(worst_c <= 1e-5, "(c) gradient relative error " + fmt("%.3g", worst_c));

  // (d) along full lambda paths with warm starts
  for (int trial = 0; trial < 10; ++trial) {
    const auto prob = random_problem(rng, 60, 8);
    const double mix = 0.2 + 0.8 * rng.uniform01();
    Coefficients warm;
    for (double lam : log_spaced_grid(prob.net.lambda_max(mix), 20, 1e-3)) {
      const auto fit = prob.net.fit(lam, mix, warm);
      warm = fit.coef;
      ++fits;
      o.check(monotone(fit.objective_trace), "(d) objective increased");
      o.check(fit.converged, "(d) fit did not converge");
    }
  }
  if (o.pass) {
    o.detail = "univariate err " + fmt("%.2g", worst_b) + ", grad rel err " + fmt("%.2g", worst_c) + ", " +
               std::to_string(fits) + " monotone fits";
  }
  return o;
}

// 8 --------------------------------------------------------------------------
Outcome cv_partition() {
  Outcome o;
  for (std::size_t n : {20u, 23u, 100u}) {
    const auto folds = partition_folds(n, 10, 42);
    std::vector<int> seen(n, 0);
    std::size_t lo = n;
    std::size_t hi = 0;
    for (const auto& f : folds) {
      lo = std::min(lo, f.size());
      hi = std::max(hi, f.size());
      for (auto i : f) ++seen.at(i);
    }
    o.check(folds.size() == 10, "fold count");
    o.check(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }), "not a partition");
    o.check(hi - lo <= 1, "unbalanced sizes");
    o.check(folds == partition_folds(n, 10, 42), "not seed-deterministic");
  }
  if (o.pass) o.detail = "n = 20, 23, 100";
  return o;
}

// 9 --------------------------------------------------------------------------
Outcome threshold_classification() {
  Outcome o;
  const std::pair<double, SentimentClass> table[] = {
      {0.0, SentimentClass::negative}, {0.2, SentimentClass::negative},  {0.35, SentimentClass::neutral},
      {0.5, SentimentClass::neutral},  {0.65, SentimentClass::neutral},  {0.7, SentimentClass::positive},
      {1.0, SentimentClass::positive}};
  for (const auto& [p, want] : table) o.check(classify(p) == want, "p = " + fmt("%g", p));
  if (o.pass) o.detail = "7 probabilities";
  return o;
}

// 10 -------------------------------------------------------------------------
Outcome aggregation_oracle() {
  Outcome o;
  Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    const auto scores = random_scores(rng, 1 + rng.uniform_index(300));

    for (std::optional<DiscussionTopic> topic : {std::optional<DiscussionTopic>{}, std::optional{DiscussionTopic::T2}}) {
      const auto reports = speaker_positiveness(scores, topic);
      const auto groups = brute_speaker_groups(scores, topic);
      o.check(reports.size() == groups.size(), "speaker count");
      for (const auto& r : reports) {
        const auto m = brute_moments(groups.at({r.community_label, r.session_id, r.speaker_id}));
        o.check(std::abs(r.mean - m.mean) <= 1e-12 && r.count == m.count, "speaker mean");
      }
    }

    const auto mu = topic_mean_positiveness(scores);
    const auto cells = brute_topic_cells(scores);
    o.check(mu.size() == cells.size(), "topic cell count");
    for (const auto& r : mu) {
      o.check(std::abs(r.mu - brute_moments(cells.at({r.discussion_topic, r.community_label})).mean) <= 1e-12,
              "topic mu");
    }

    std::vector<ModeMention> mentions;
    const std::vector<std::string> names{"walking", "bicycling", "public_transportation", "private_car",
                                         "shared_multimodal"};
    std::map<std::string, std::vector<double>> by_mode;
    const std::size_t m = rng.uniform_index(200);
    for (std::size_t i = 0; i < m; ++i) {
      ModeMention mm;
      mm.mode = names[rng.uniform_index(4)];  // shared_multimodal stays empty
      mm.score = 2 * rng.uniform01() - 1;
      by_mode[mm.mode].push_back(mm.score);
      mentions.push_back(mm);
    }
    const auto table = mode_sentiment_table(mentions, names);
    o.check(table.size() == names.size(), "mode rows");
    for (const auto& row : table) {
      const auto bm = brute_moments(by_mode[row.mode]);
      o.check(row.count == bm.count, "mode count");
      if (bm.count == 0) {
        o.check(!row.mean && !row.std_dev, "empty mode has statistics");
        continue;
      }
      o.check(row.mean && std::abs(*row.mean - bm.mean) <= 1e-12, "mode mean");
      o.check(row.std_dev.has_value() == bm.std_dev.has_value(), "mode std presence");
      if (bm.std_dev) o.check(std::abs(*row.std_dev - *bm.std_dev) <= 1e-12, "mode std");
    }

    const auto csv = mode_table_csv(table);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    o.check(line == "mode,mean,std_dev,count", "mode table header");
    while (std::getline(in, line)) o.check(std::count(line.begin(), line.end(), ',') == 3, "mode table row shape");
  }
  if (o.pass) o.detail = "50 randomized score sets";
  return o;
}

// 11 & 12 --------------------------------------------------------------------
std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    files[fs::relative(e.path(), root).generic_string()] = ss.str();
  }
  return files;
}

struct GoldenRun {
  Outcome outcome;
  PipelineConfig config;
};

GoldenRun golden_run() {
  GoldenRun g;
  auto& o = g.outcome;
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path work = fs::temp_directory_path() / "talkmine_acceptance";
  fs::remove_all(work);

  auto cfg = validate_config(fs::path(TALKMINE_SAMPLE_DIR) / "sample.conf");
  cfg.format = ReportFormat::both;

  auto a = cfg;
  a.output = work / "run_a";
  const auto bundle = run_pipeline(a);
  const double first_run = seconds_since(t0);
  auto b = cfg;
  b.output = work / "run_b";
  run_pipeline(b);
  auto c = cfg;
  c.output = work / "staged";
  run_ingest(c);
  run_topics(c);
  run_sentiment(c);
  run_report(c);
  const auto sa = snapshot(a.output);
  o.check(!sa.empty() && sa == snapshot(b.output), "repeated runs differ");
  o.check(sa == snapshot(c.output), "run and staged paths differ");
  o.check(sa.contains("report/bundle.json") && sa.contains("report/topic_mu.csv") && sa.contains("report/HP/speakers.csv") &&
              sa.contains("report/EV/mode_table.csv"),
          "report files missing");
  o.check(bundle.topics.size() == 2, "expected two communities");
  for (const auto& t : bundle.topics) o.check(t.topics.size() == 5, "expected 5 topics per community");
  o.check(first_run <= 120.0, "run took " + fmt("%.1f", first_run) + " s");
  if (o.pass) o.detail = std::to_string(sa.size()) + " files identical over 3 runs, " + fmt("%.1f", first_run) + " s per run";
  g.config = a;
  return g;
}

Outcome sentiment_sanity(const PipelineConfig& cfg) {
  Outcome o;
  std::ifstream in(cfg.output / "sentiment" / "classifier.json");
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto clf = classifier_from_json(ss.str());
  const auto pos = score_text(clf, "this service is wonderful and spectacular", cfg.rules);
  const auto neg = score_text(clf, "this service is horrible and awful", cfg.rules);
  o.check(pos.sentiment == SentimentClass::positive, "positive sentence scored " + fmt("%.4f", pos.probability_of_positiveness));
  o.check(neg.sentiment == SentimentClass::negative, "negative sentence scored " + fmt("%.4f", neg.probability_of_positiveness));
  o.detail = "p(pos) = " + fmt("%.4f", pos.probability_of_positiveness) +
             ", p(neg) = " + fmt("%.4f", neg.probability_of_positiveness);
  return o;
}

}  // namespace

int main() {
  log::set_level(log::Level::error);
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& f) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %2d %s (%s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };

  report(1, "LDA synthetic recovery", lda_synthetic_recovery);
  report(2, "LDA single topic", lda_single_topic);
  report(3, "Gibbs invariants", gibbs_invariants);
  report(4, "Gibbs conditional table", gibbs_conditional_oracle);
  report(5, "TF-IDF brute force", tfidf_brute_force);
  report(6, "log_odds branch table", log_odds_conformance);
  report(7, "elastic net", elastic_net_correctness);
  report(8, "CV partition", cv_partition);
  report(9, "threshold classification", threshold_classification);
  report(10, "aggregation oracle", aggregation_oracle);

  GoldenRun golden;
  report(11, "end-to-end golden run", [&] {
    golden = golden_run();
    return golden.outcome;
  });
  report(12, "sentiment sanity", [&] {
    if (golden.config.output.empty()) {
      Outcome o;
      o.pass = false;
      o.detail = "golden run did not produce a classifier";
      return o;
    }
    return sentiment_sanity(golden.config);
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
