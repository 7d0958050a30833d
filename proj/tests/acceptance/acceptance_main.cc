// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit status if
// any criterion fails or exceeds its time limit.

#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <json.hpp>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hardlabel/batch.h"
#include "hardlabel/errors.h"
#include "hardlabel/record_io.h"
#include "hardlabel/remote_victim.h"
#include "hardlabel/search.h"
#include "hardlabel/weight_table.h"
#include "support/oracles.h"
#include "support/synthetic.h"

namespace hl = hardlabel;
namespace hlt = hardlabel::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double time_limit_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------------------
// Exact formulas

Outcome exact_formulas() {
  constexpr double kTol = 1e-12;
  int cases = 0;
  int failures = 0;
  std::string first_failure;
  auto check = [&](const std::string& what, double got, double want) {
    ++cases;
    if (!(std::abs(got - want) <= kTol)) {
      ++failures;
      if (first_failure.empty()) {
        first_failure = fmt("%s: got %.17g want %.17g", what.c_str(), got, want);
      }
    }
  };

  auto ten = hl::TokenizedText::from_words(
      {"a0", "a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8", "a9"});
  auto two_changed = ten.with_words(
      {"b0", "a1", "a2", "a3", "a4", "b5", "a6", "a7", "a8", "a9"});
  auto all_changed = ten.with_words(
      {"b0", "b1", "b2", "b3", "b4", "b5", "b6", "b7", "b8", "b9"});
  check("d(x, x)", hl::perturbation_rate(ten, ten), 0.0);
  check("d 2 of 10", hl::perturbation_rate(two_changed, ten), 0.2);
  check("d all", hl::perturbation_rate(all_changed, ten), 1.0);
  check("F benign", hl::fitness(two_changed, ten, false).value, 0.0);
  check("F d=0.2", hl::fitness(two_changed, ten, true).value, 0.8);
  check("F identity", hl::fitness(ten, ten, true).value, 1.0);

  auto zero_table = [] {
    return hl::WeightTable(std::vector<std::vector<double>>(
        5, std::vector<double>(5, 0.0)));
  };
  {
    auto w = zero_table();
    std::vector<hl::Replacement> rep{{3, 0, 2}};
    w.update(rep, true, 0.5);
    check("update adv W[3][2]", w.at(3, 2), 0.5);
    check("update adv W[3][0]", w.at(3, 0), -1.0);
    check("update adv row sum", w.row_sum(3), -0.5);
    check("update adv other row", w.row_sum(2), 0.0);
  }
  {
    auto w = zero_table();
    std::vector<hl::Replacement> rep{{3, 0, 2}};
    w.update(rep, false, 0.5);
    check("update benign W[3][2]", w.at(3, 2), -0.5);
    check("update benign W[3][0]", w.at(3, 0), 1.0);
    check("update benign row sum", w.row_sum(3), 0.5);
  }
  {
    auto w = zero_table();
    std::vector<hl::Replacement> rep{{1, 2, 2}};
    w.update(rep, true, 0.5);
    check("update self-replacement", w.at(1, 2), -0.5);
  }

  {
    auto w = zero_table();
    std::vector<std::size_t> eligible{0, 1, 2, 3};
    auto p = hl::position_sampling_probs(w, eligible);
    for (std::size_t k = 0; k < 4; ++k) check("p_i uniform", p[k], 0.25);
  }
  {
    hl::WeightTable w(std::vector<std::vector<double>>{{0.0}, {std::log(3.0)}});
    std::vector<std::size_t> eligible{0, 1};
    auto p = hl::position_sampling_probs(w, eligible);
    check("p_i row sum 0", p[0], 2.0 / 3.0);
    check("p_i row sum ln3", p[1], 1.0 / 3.0);
  }
  {
    hl::WeightTable w(std::vector<std::vector<double>>{{0.0}, {60.0}});
    std::vector<std::size_t> eligible{0, 1};
    auto p = hl::position_sampling_probs(w, eligible);
    check("p_i saturated low", p[0], 1.0);
    check("p_i saturated high", p[1], 0.0);
  }
  {
    auto w = zero_table();
    auto p = hl::candidate_sampling_probs(w, 0);
    for (double v : p) check("p_ij uniform", v, 0.2);
    hl::WeightTable w2(std::vector<std::vector<double>>{{0.0, std::log(3.0)}, {1.7}});
    auto q = hl::candidate_sampling_probs(w2, 0);
    check("p_ij sigma(0)", q[0], 0.4);
    check("p_ij sigma(ln3)", q[1], 0.6);
    check("p_ij single", hl::candidate_sampling_probs(w2, 1)[0], 1.0);
  }
  check("sigmoid(ln 3)", hl::sigmoid(std::log(3.0)), 0.75);

  {
    hl::LinearBagVictim v({{"good", 1.0}, {"fine", 0.2}}, 0.0);
    auto x = hl::TokenizedText::from_words({"good"});
    hl::CandidateSet c({{"good", "fine"}}, 1);
    auto imp = hl::true_word_importance(v, x, c);
    check("importance column 0", imp[0][0], 0.0);
    check("importance good->fine", imp[0][1], 0.8);
    hl::LinearBagVictim z({{"good", 1.0}}, 0.0);
    auto x2 = hl::TokenizedText::from_words({"meh"});
    hl::CandidateSet c2({{"meh", "blah"}}, 1);
    check("importance zero weights", hl::true_word_importance(z, x2, c2)[0][1], 0.0);
  }
  {
    hl::WeightTable w(std::vector<std::vector<double>>{{2.0, 0.5}, {-1.0}});
    auto s = w.rescaled();
    check("rescale 0.5 / 2", s.at(0, 1), 0.25);
    check("rescale -1 / 2", s.at(1, 0), -0.5);
    check("rescale zero table", zero_table().rescaled().at(2, 2), 0.0);
  }

  Outcome out;
  out.pass = failures == 0 && cases >= 20;
  out.detail = fmt("%d/%d cases within 1e-12", cases - failures, cases);
  if (!first_failure.empty()) out.detail += "; first failure " + first_failure;
  return out;
}

// ---------------------------------------------------------------------------
// Brute-force equivalence

Outcome brute_force_equivalence() {
  constexpr int kInstances = 100;
  int equal = 0;
  int within_one = 0;
  int checked = 0;
  for (int k = 0; k < kInstances; ++k) {
    auto inst = hlt::make_tiny_instance(hl::derive_seed(2024, k));
    auto optimum = hlt::brute_force_min_perturbation(inst.text, inst.candidates,
                                                     inst.victim);
    hl::SearchConfig cfg;
    cfg.budget = 5000;
    cfg.delta = 2;
    cfg.synonyms = inst.candidates.max_synonyms();
    hl::OracleHandle handle(inst.victim, cfg.budget);
    hl::Rng rng(hl::derive_seed(77, k));
    auto rec = hl::run_attack(inst.text, inst.candidates, handle, inst.label,
                              cfg, rng);
    ++checked;
    if (!optimum || !rec.adversary) {
      if (!optimum && !rec.adversary) {
        ++equal;
        ++within_one;
      }
      continue;
    }
    if (rec.perturbed_words == *optimum) ++equal;
    if (rec.perturbed_words <= *optimum + 1) ++within_one;
  }
  Outcome out;
  out.pass = equal >= 90 && within_one == kInstances;
  out.detail = fmt("optimum reached %d/%d (need >= 90), within +1 word %d/%d",
                   equal, checked, within_one, checked);
  return out;
}

// ---------------------------------------------------------------------------
// Ablation ordering

constexpr std::int64_t kAblationBudget = 300;

double final_perturbation(const hlt::ToyInstance& inst, hl::Variant variant,
                          std::uint64_t seed) {
  hl::SearchConfig cfg;
  cfg.budget = kAblationBudget;
  cfg.variant = variant;
  hl::OracleHandle handle(const_cast<hl::LinearBagVictim&>(inst.victim),
                          cfg.budget);
  hl::Rng rng(seed);
  auto rec = hl::run_attack(inst.text, inst.candidates, handle, inst.label,
                            cfg, rng);
  return rec.adversary ? rec.perturbation : 1.0;
}

Outcome ablation_ordering() {
  constexpr int kInstances = 200;
  const std::vector<hl::Variant> rivals = {hl::Variant::kRandomSearch,
                                           hl::Variant::kRandomFlip,
                                           hl::Variant::kHybridUnweighted};
  std::vector<double> full(kInstances);
  std::vector<std::vector<double>> other(rivals.size(),
                                         std::vector<double>(kInstances));
  for (int k = 0; k < kInstances; ++k) {
    auto inst = hlt::make_benchmark_instance(hl::derive_seed(99, k));
    std::uint64_t seed = hl::derive_seed(123, k);
    full[k] = final_perturbation(inst, hl::Variant::kFull, seed);
    for (std::size_t v = 0; v < rivals.size(); ++v) {
      other[v][k] = final_perturbation(inst, rivals[v], seed);
    }
  }
  auto mean = [](const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
  };
  Outcome out;
  out.pass = true;
  out.detail = fmt("full %.2f%%", 100.0 * mean(full));
  for (std::size_t v = 0; v < rivals.size(); ++v) {
    std::size_t wins = 0;
    std::size_t losses = 0;
    for (int k = 0; k < kInstances; ++k) {
      if (full[k] < other[v][k]) ++wins;
      if (full[k] > other[v][k]) ++losses;
    }
    double p = hlt::sign_test_p_value(wins, losses);
    bool ok = mean(full) < mean(other[v]) && p < 0.05;
    out.pass = out.pass && ok;
    out.detail += fmt("; %s %.2f%% (W/L %zu/%zu, p=%.2g)",
                      std::string(hl::to_string(rivals[v])).c_str(),
                      100.0 * mean(other[v]), wins, losses, p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Weight-table validity

Outcome weight_table_validity() {
  constexpr int kRuns = 50;
  constexpr double kTopFraction = 0.30;
  int hits = 0;
  int oracle_agrees = 0;
  double null_rate = 0.0;
  for (int k = 0; k < kRuns; ++k) {
    auto inst = hlt::make_key_instance(hl::derive_seed(555, k));
    // Ground truth: the key position carries the largest importance.
    auto truth = hl::true_word_importance(inst.victim, inst.text, inst.candidates);
    std::size_t argmax = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      for (double v : truth[i]) {
        if (v > best) {
          best = v;
          argmax = i;
        }
      }
    }
    if (argmax == inst.key_position) ++oracle_agrees;

    hl::SearchConfig cfg;
    hl::OracleHandle handle(inst.victim, cfg.budget);
    hl::Rng rng(hl::derive_seed(556, k));
    auto rec = hl::run_attack(inst.text, inst.candidates, handle, inst.label,
                              cfg, rng);
    if (!rec.initial_adversary) continue;

    // Rank among the positions the initial adversary perturbed, by row sum
    // (non-adversarial outcomes raise it). Ties count against the key.
    std::vector<std::size_t> perturbed;
    for (std::size_t i = 0; i < inst.text.size(); ++i) {
      if (rec.initial_adversary->word(i) != inst.text.word(i)) perturbed.push_back(i);
    }
    const double key_sum = rec.weights.row_sum(inst.key_position);
    std::size_t rank = 1;
    for (std::size_t i : perturbed) {
      if (i != inst.key_position && rec.weights.row_sum(i) >= key_sum) ++rank;
    }
    const auto cutoff = static_cast<std::size_t>(
        std::max(1.0, std::floor(kTopFraction * static_cast<double>(perturbed.size()))));
    if (rank <= cutoff) ++hits;
    null_rate += static_cast<double>(cutoff) / static_cast<double>(perturbed.size());
  }
  null_rate /= kRuns;
  Outcome out;
  out.pass = oracle_agrees == kRuns && hits * 100 >= 70 * kRuns;
  out.detail = fmt("key in top 30%% in %d/%d runs (need >= 70%%); uniform-rank "
                   "null %.1f%%; importance oracle agrees %d/%d",
                   hits, kRuns, 100.0 * null_rate, oracle_agrees, kRuns);
  return out;
}

// ---------------------------------------------------------------------------
// Budget and determinism fuzz

// Forwards to a linear victim and flags any queried text that changed a
// masked position.
class MaskCheckingVictim : public hl::Victim {
 public:
  MaskCheckingVictim(const hlt::ToyInstance& inst) : inst_(inst) {}
  hl::Label classify(const hl::TokenizedText& x) override {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!inst_.text.attackable(i) && x.word(i) != inst_.text.word(i)) {
        ++violations;
      }
    }
    ++calls;
    return inst_.victim.label_of(x);
  }
  std::int64_t violations = 0;
  std::int64_t calls = 0;

 private:
  const hlt::ToyInstance& inst_;
};

Outcome budget_determinism_fuzz() {
  constexpr int kConfigs = 1000;
  hl::Rng meta(4242);
  int over_budget = 0;
  int nondeterministic = 0;
  int mask_violations = 0;
  int replay_mismatches = 0;
  const std::vector<hl::Variant> variants = {
      hl::Variant::kFull,          hl::Variant::kWeightTableOnly,
      hl::Variant::kHybridUnweighted, hl::Variant::kMutationForLocalSearch,
      hl::Variant::kCrossoverForRecombination, hl::Variant::kRandomSearch,
      hl::Variant::kRandomFlip};
  for (int k = 0; k < kConfigs; ++k) {
    hl::SearchConfig cfg;
    cfg.delta = meta.uniform_between(1, 7);
    cfg.population_size = meta.uniform_between(1, 8);
    cfg.local_search_steps = meta.uniform_between(1, 10);
    cfg.budget = static_cast<std::int64_t>(meta.uniform_between(0, 400));
    cfg.reward = 0.1 + meta.uniform01();
    cfg.success_threshold = 0.05 + 0.95 * meta.uniform01();
    cfg.restart_initialization = meta.bernoulli(0.3);
    cfg.restore_mode = meta.bernoulli(0.3) ? hl::RestoreMode::kJoint
                                           : hl::RestoreMode::kHalf;
    cfg.variant = variants[meta.uniform_index(variants.size())];
    cfg.record_trace = true;
    const std::uint64_t seed = meta.next();

    hlt::ToyInstance inst;
    if (meta.bernoulli(0.5)) {
      inst = hlt::make_tiny_instance(meta.next());
    } else {
      hlt::BenchmarkShape shape;
      shape.attackable = meta.uniform_between(2, 25);
      shape.decisive = meta.uniform_between(1, 4);
      shape.synonyms = meta.uniform_between(1, 5);
      shape.fillers = meta.uniform_between(0, 4);
      inst = hlt::make_benchmark_instance(meta.next(), shape);
    }
    cfg.synonyms = std::max<std::size_t>(1, inst.candidates.max_synonyms());

    std::string dumps[2];
    for (int rep = 0; rep < 2; ++rep) {
      MaskCheckingVictim victim(inst);
      hl::OracleHandle handle(victim, cfg.budget);
      hl::Rng rng(seed);
      auto rec = hl::run_attack(inst.text, inst.candidates, handle, inst.label,
                                cfg, rng);
      if (handle.ledger() > cfg.budget || rec.queries > cfg.budget) ++over_budget;
      if (victim.violations > 0) ++mask_violations;
      if (rec.adversary) {
        for (std::size_t i = 0; i < inst.text.size(); ++i) {
          if (!inst.text.attackable(i) && rec.adversary->word(i) != inst.text.word(i)) {
            ++mask_violations;
            break;
          }
        }
      }
      if (rep == 0) {
        hl::WeightTable replay(inst.candidates);
        for (const auto& e : rec.trace) {
          if (e.weights_updated) replay.update(e.replacements, e.adversarial, cfg.reward);
        }
        if (!(replay == rec.weights)) ++replay_mismatches;
      }
      dumps[rep] = hl::record_to_json(rec).dump();
    }
    if (dumps[0] != dumps[1]) ++nondeterministic;
  }
  Outcome out;
  out.pass = over_budget == 0 && nondeterministic == 0 && mask_violations == 0 &&
             replay_mismatches == 0;
  out.detail = fmt("%d configs: over-budget %d, non-identical reruns %d, mask "
                   "violations %d, weight replay mismatches %d",
                   kConfigs, over_budget, nondeterministic, mask_violations,
                   replay_mismatches);
  return out;
}

// ---------------------------------------------------------------------------
// Budget monotonicity

Outcome budget_monotonicity() {
  constexpr int kSeedBatches = 5;
  const std::vector<std::int64_t> budgets = {100, 500, 2000};
  hlt::BenchmarkShape shape;
  auto batch = hlt::make_toy_batch(31337, 40, shape);
  hl::SynonymTable table(batch.synonyms, batch.max_synonyms);
  auto victim = batch.victim;
  hl::VictimFactory factory = [victim] {
    return std::make_unique<hl::LinearBagVictim>(*victim);
  };
  Outcome out;
  out.pass = true;
  for (int s = 0; s < kSeedBatches; ++s) {
    hl::BatchOptions opts;
    opts.search.seed = hl::derive_seed(8, s);
    opts.stopwords = &batch.stopwords;
    auto points = hl::sweep(batch.dataset, table, factory, opts,
                            hl::SweepParameter::kBudget, budgets);
    out.detail += (s ? "; " : "") + std::string("seed batch ") + std::to_string(s) + ":";
    for (std::size_t p = 0; p < points.size(); ++p) {
      out.detail += fmt(" %.1f", points[p].report.pooled.success_rate);
      if (p > 0 && points[p].report.pooled.success_rate <
                       points[p - 1].report.pooled.success_rate) {
        out.pass = false;
      }
    }
  }
  out.detail = "success % at T=100/500/2000, " + out.detail;
  return out;
}

// ---------------------------------------------------------------------------
// Remote-oracle contract

class StubServer {
 public:
  // Labels a text "1" unless it contains "bad". The first `fail_first`
  // requests get a 503.
  explicit StubServer(int fail_first = 0) : fail_first_(fail_first) {
    server_.Post("/classify", [this](const httplib::Request& req,
                                     httplib::Response& res) {
      std::lock_guard lock(mu_);
      arrivals_.push_back(std::chrono::steady_clock::now());
      if (static_cast<int>(arrivals_.size()) <= fail_first_) {
        res.status = 503;
        return;
      }
      auto body = nlohmann::json::parse(req.body);
      std::string text = body.at("input").at("text").get<std::string>();
      int label = text.find("bad") == std::string::npos ? 1 : 0;
      res.set_content(nlohmann::json{{"result", {{"label", label}}}}.dump(),
                      "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubServer() {
    server_.stop();
    thread_.join();
  }
  std::string endpoint() const {
    return "http://127.0.0.1:" + std::to_string(port_) + "/classify";
  }
  std::vector<std::chrono::steady_clock::time_point> arrivals() {
    std::lock_guard lock(mu_);
    return arrivals_;
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  int fail_first_;
  std::thread thread_;
  std::mutex mu_;
  std::vector<std::chrono::steady_clock::time_point> arrivals_;
};

hl::RemoteVictimConfig stub_config(const StubServer& s) {
  hl::RemoteVictimConfig c;
  c.endpoint = s.endpoint();
  c.request_template = R"({"input": {"text": "{text}"}})";
  c.label_path = "result.label";
  c.timeout = std::chrono::milliseconds(2000);
  return c;
}

Outcome remote_oracle_contract() {
  using ms = std::chrono::milliseconds;
  std::vector<std::string> problems;
  auto x = hl::TokenizedText::from_words({"good", "movie"});
  auto bad = hl::TokenizedText::from_words({"bad", "movie"});

  // Rate limiting.
  {
    StubServer server;
    auto cfg = stub_config(server);
    cfg.min_interval = ms(40);
    hl::RemoteVictim victim(cfg);
    hl::OracleHandle handle(victim, 100, {.charge_original_query = false, .cache = false});
    for (int k = 0; k < 5; ++k) handle.query(k % 2 ? x : bad);
    auto a = server.arrivals();
    for (std::size_t k = 1; k < a.size(); ++k) {
      if (a[k] - a[k - 1] < ms(38)) problems.push_back("rate limit violated");
    }
    if (a.size() != 5) problems.push_back("expected 5 requests");
  }
  // Retries with exponential backoff.
  {
    StubServer server(2);
    auto cfg = stub_config(server);
    cfg.max_attempts = 3;
    cfg.backoff = ms(50);
    hl::RemoteVictim victim(cfg);
    hl::OracleHandle handle(victim, 10);
    auto label = handle.query(x);
    auto a = server.arrivals();
    if (label != hl::Label{"1"}) problems.push_back("wrong label after retries");
    if (a.size() != 3) problems.push_back("expected 3 attempts");
    if (a.size() == 3 && (a[1] - a[0] < ms(48) || a[2] - a[1] < ms(98))) {
      problems.push_back("backoff too short");
    }
    if (handle.ledger() != 1) problems.push_back("retries changed the ledger");
  }
  // Exhausted retries: failure, no ledger charge.
  {
    StubServer server(100);
    auto cfg = stub_config(server);
    cfg.max_attempts = 2;
    cfg.backoff = ms(5);
    hl::RemoteVictim victim(cfg);
    hl::OracleHandle handle(victim, 10);
    bool failed = false;
    try {
      handle.query(x);
    } catch (const hl::VictimFailureError&) {
      failed = true;
    }
    if (!failed) problems.push_back("no failure after retries");
    if (handle.ledger() != 0) problems.push_back("failed call charged");
  }
  // Cache hits still cost a query; budget aborts before the wire.
  {
    StubServer server;
    hl::RemoteVictim victim(stub_config(server));
    hl::OracleHandle handle(victim, 4);
    handle.query(x);
    handle.query(x);
    handle.query(x);
    if (handle.ledger() != 3) problems.push_back("cache hits not charged");
    if (server.arrivals().size() != 1) problems.push_back("cache not used");
    handle.query(bad);
    bool refused = false;
    try {
      handle.query(hl::TokenizedText::from_words({"new", "text"}));
    } catch (const hl::BudgetExhaustedError&) {
      refused = true;
    }
    if (!refused) problems.push_back("query past budget not refused");
    if (server.arrivals().size() != 2) problems.push_back("request sent past budget");
    if (handle.ledger() != 4) problems.push_back("ledger moved past budget");
  }
  // A whole attack over the wire stops cleanly at the budget.
  {
    StubServer server;
    hl::RemoteVictim victim(stub_config(server));
    auto text = hl::TokenizedText::from_words({"good", "plot", "good", "cast"});
    hl::CandidateSet cands({{"good", "bad", "fine"},
                            {"plot", "story"},
                            {"good", "nice", "bad"},
                            {"cast", "actors"}},
                           2);
    hl::SearchConfig cfg;
    cfg.budget = 60;
    hl::OracleHandle handle(victim, cfg.budget);
    auto original = handle.classify_original(text);
    hl::Rng rng(5);
    auto rec = hl::run_attack(text, cands, handle, original, cfg, rng);
    if (handle.ledger() != 60 || rec.queries != 60) {
      problems.push_back("attack did not stop exactly at the budget");
    }
    if (!rec.adversary) problems.push_back("remote attack found no adversary");
    if (static_cast<std::int64_t>(server.arrivals().size()) >
        handle.ledger() + handle.setup_queries()) {
      problems.push_back("more requests than charged queries");
    }
  }
  Outcome out;
  out.pass = problems.empty();
  out.detail = problems.empty() ? "rate limit, backoff, ledger/cache accounting "
                                  "and budget abort all hold"
                                : problems.front();
  for (std::size_t k = 1; k < problems.size(); ++k) out.detail += "; " + problems[k];
  return out;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"exact-formula suite", 1.0, exact_formulas},
      {"brute-force equivalence", 120.0, brute_force_equivalence},
      {"ablation ordering", 600.0, ablation_ordering},
      {"weight-table validity", 120.0, weight_table_validity},
      {"budget and determinism invariants", 300.0, budget_determinism_fuzz},
      {"budget monotonicity", 300.0, budget_monotonicity},
      {"remote-oracle contract", 30.0, remote_oracle_contract},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = secs < c.time_limit_seconds;
    bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("[%s] %s (%.2fs, limit %.0fs): %s%s\n", pass ? "PASS" : "FAIL",
                c.name.c_str(), secs, c.time_limit_seconds, o.detail.c_str(),
                in_time ? "" : " [time limit exceeded]");
    std::fflush(stdout);
  }
  std::printf("%zu/%zu acceptance criteria passed\n", criteria.size() - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
