#include "hardlabel/search.h"

#include <algorithm>
#include <array>
#include <utility>

#include "hardlabel/errors.h"

namespace hardlabel {
namespace {

constexpr std::array<std::pair<Variant, std::string_view>, 7> kVariantNames{{
    {Variant::kFull, "full"},
    {Variant::kWeightTableOnly, "weight_table_only"},
    {Variant::kHybridUnweighted, "hybrid_unweighted"},
    {Variant::kMutationForLocalSearch, "mutation_for_localsearch"},
    {Variant::kCrossoverForRecombination, "crossover_for_recombination"},
    {Variant::kRandomSearch, "random_search"},
    {Variant::kRandomFlip, "random_flip"},
}};

constexpr std::array<std::pair<AttackStatus, std::string_view>, 4> kStatusNames{{
    {AttackStatus::kSuccess, "success"},
    {AttackStatus::kFailedInitialization, "failed_initialization"},
    {AttackStatus::kFailedThreshold, "failed_threshold"},
    {AttackStatus::kBudgetExhaustedWithBest, "budget_exhausted_with_best"},
}};

constexpr std::array<std::pair<TraceOp, std::string_view>, 3> kOpNames{{
    {TraceOp::kInitialize, "initialize"},
    {TraceOp::kLocalSearch, "local_search"},
    {TraceOp::kRecombine, "recombine"},
}};

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& t,
                         E e) {
  for (const auto& [k, v] : t) {
    if (k == e) return v;
  }
  return "unknown";
}

template <typename E, std::size_t N>
E value_of(const std::array<std::pair<E, std::string_view>, N>& t,
           std::string_view name, std::string_view what) {
  for (const auto& [k, v] : t) {
    if (v == name) return k;
  }
  throw InvalidArgumentError("unknown " + std::string(what) + " '" +
                             std::string(name) + "'");
}

std::vector<std::size_t> perturbed_positions(const TokenizedText& x,
                                             const TokenizedText& x_orig) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x.word(i) != x_orig.word(i)) out.push_back(i);
  }
  return out;
}

// Weighted sampling of k distinct positions; the distribution is renormalized
// over the remaining positions after every draw.
std::vector<std::size_t> sample_positions(const WeightTable& table,
                                          std::vector<std::size_t> pool,
                                          std::size_t k, Rng& rng) {
  std::vector<std::size_t> chosen;
  chosen.reserve(k);
  while (chosen.size() < k && !pool.empty()) {
    auto probs = position_sampling_probs(table, pool);
    std::size_t pick = rng.weighted_index(probs);
    chosen.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<long>(pick));
  }
  return chosen;
}

std::size_t draw_replacement(const WeightTable& table,
                             const CandidateSet& candidates, std::size_t i,
                             const SearchConfig& config, Rng& rng) {
  switch (config.variant) {
    case Variant::kRandomFlip:
      return 0;
    case Variant::kRandomSearch:
      return rng.uniform_index(candidates.at(i).size());
    default:
      break;
  }
  if (config.restore_mode == RestoreMode::kHalf && rng.bernoulli(0.5)) {
    return 0;
  }
  return rng.weighted_index(candidate_sampling_probs(table, i));
}

// Stable ordering for selection: adversaries first, then fitness.
bool ranks_higher(const Member& a, const Member& b) {
  if (a.adversarial != b.adversarial) return a.adversarial;
  return a.fitness.value > b.fitness.value;
}

class AttackSession {
 public:
  AttackSession(const TokenizedText& x, const CandidateSet& candidates,
                OracleHandle& handle, const Label& original_label,
                const SearchConfig& config, Rng& rng)
      : x_(x),
        candidates_(candidates),
        handle_(handle),
        label_(original_label),
        config_(config),
        rng_(rng),
        table_(candidates) {}

  AttackRecord run();

 private:
  std::vector<TraceEntry>* trace() {
    return config_.record_trace ? &record_.trace : nullptr;
  }

  bool learns_weights() const {
    return config_.variant != Variant::kHybridUnweighted;
  }

  Member evaluated_member(TokenizedText text, bool adversarial) const {
    Fitness f = fitness(text, x_, adversarial);
    return Member{std::move(text), f, adversarial};
  }

  void offer(const Member& m) {
    if (!m.adversarial) return;
    if (!best_ || m.fitness.value > best_->fitness.value) best_ = m;
  }

  // One local-search move plus weight update. Requires budget.
  Member step(const Member& current);
  void optimize_single_chain(Member current);
  void optimize_population(const Member& initial);
  void finish();

  const TokenizedText& x_;
  const CandidateSet& candidates_;
  OracleHandle& handle_;
  const Label& label_;
  const SearchConfig& config_;
  Rng& rng_;
  WeightTable table_;
  std::optional<Member> best_;
  bool population_incomplete_ = false;
  AttackRecord record_;
};

Member AttackSession::step(const Member& current) {
  LocalSearchResult r = local_search_step(current.text, x_, candidates_,
                                          table_, handle_, label_, config_,
                                          rng_);
  if (!r.evaluated) return current;
  const bool update = learns_weights();
  if (update) table_.update(r.replaced, r.adversarial, config_.reward);

  Member next = r.adversarial ? evaluated_member(r.text, true) : current;
  if (auto* t = trace()) {
    TraceEntry e;
    e.query = handle_.ledger();
    e.op = TraceOp::kLocalSearch;
    for (const auto& rep : r.replaced) e.positions.push_back(rep.position);
    e.replacements = r.replaced;
    e.adversarial = r.adversarial;
    e.accepted = r.adversarial;
    e.fitness = r.adversarial ? next.fitness.value : 0.0;
    e.weights_updated = update;
    t->push_back(std::move(e));
  }
  offer(next);
  return next;
}

void AttackSession::optimize_single_chain(Member current) {
  while (!handle_.exhausted()) {
    std::int64_t before = handle_.ledger();
    current = step(current);
    if (handle_.ledger() == before) break;  // nothing left to perturb
  }
}

void AttackSession::optimize_population(const Member& initial) {
  const std::size_t s = config_.population_size;
  const std::size_t n = config_.local_search_steps;

  // P^1: the initial adversary followed by S - 1 chained local-search steps.
  std::vector<Member> population{initial};
  Member current = initial;
  for (std::size_t k = 1; k < s; ++k) {
    if (handle_.exhausted()) {
      population_incomplete_ = true;
      return;
    }
    current = step(current);
    population.push_back(current);
  }

  const bool weighted_recombination =
      config_.variant != Variant::kCrossoverForRecombination;
  while (!handle_.exhausted()) {
    std::int64_t before = handle_.ledger();
    ++record_.generations;

    auto children = recombine(population, x_, candidates_, table_, handle_,
                              label_, weighted_recombination, rng_, trace());
    for (auto& c : children) {
      offer(c);
      population.push_back(std::move(c));
    }

    // Members present now are processed; their outputs join the pool but are
    // not revisited this generation.
    const std::size_t snapshot = population.size();
    for (std::size_t idx = 0; idx < snapshot && !handle_.exhausted(); ++idx) {
      Member m = population[idx];
      for (std::size_t k = 0; k < n && !handle_.exhausted(); ++k) m = step(m);
      population.push_back(std::move(m));
    }

    std::stable_sort(population.begin(), population.end(), ranks_higher);
    if (population.size() > s) population.resize(s);

    if (handle_.ledger() == before) break;
  }
}

void AttackSession::finish() {
  record_.weights = table_;
  record_.queries = handle_.ledger();
  if (!best_) {
    record_.status = AttackStatus::kFailedInitialization;
    return;
  }
  record_.adversary = best_->text;
  record_.perturbed_words = count_differences(best_->text, x_);
  record_.perturbation = perturbation_rate(best_->text, x_);
  if (record_.perturbation < config_.success_threshold) {
    record_.status = AttackStatus::kSuccess;
  } else if (population_incomplete_) {
    record_.status = AttackStatus::kBudgetExhaustedWithBest;
  } else {
    record_.status = AttackStatus::kFailedThreshold;
  }
}

AttackRecord AttackSession::run() {
  record_.original = x_;
  record_.original_label = label_;
  record_.candidates = candidates_;
  const std::int64_t start = handle_.ledger();

  auto initial = initialize_adversary(x_, candidates_, handle_, label_, rng_,
                                      config_.restart_initialization, trace());
  if (!initial) {
    finish();
    record_.queries = handle_.ledger() - start;
    return std::move(record_);
  }
  record_.initial_adversary = *initial;
  Member first = evaluated_member(*initial, true);
  offer(first);

  if (config_.variant == Variant::kWeightTableOnly) {
    optimize_single_chain(first);
  } else {
    optimize_population(first);
  }
  finish();
  record_.queries = handle_.ledger() - start;
  return std::move(record_);
}

}  // namespace

std::string_view to_string(Variant v) { return name_of(kVariantNames, v); }
Variant parse_variant(std::string_view name) {
  return value_of(kVariantNames, name, "variant");
}
std::string_view to_string(AttackStatus s) { return name_of(kStatusNames, s); }
AttackStatus parse_status(std::string_view name) {
  return value_of(kStatusNames, name, "status");
}
std::string_view to_string(TraceOp op) { return name_of(kOpNames, op); }
TraceOp parse_trace_op(std::string_view name) {
  return value_of(kOpNames, name, "trace op");
}

void SearchConfig::validate() const {
  if (delta < 1) throw InvalidArgumentError("delta must be >= 1");
  if (population_size < 1) {
    throw InvalidArgumentError("population size must be >= 1");
  }
  if (local_search_steps < 1) {
    throw InvalidArgumentError("local search steps must be >= 1");
  }
  if (budget < 0) throw InvalidArgumentError("budget must be >= 0");
  if (synonyms < 1) throw InvalidArgumentError("synonym count must be >= 1");
  if (!(reward > 0.0)) throw InvalidArgumentError("reward must be > 0");
  if (!(success_threshold > 0.0 && success_threshold <= 1.0)) {
    throw InvalidArgumentError("success threshold must be in (0, 1]");
  }
}

TokenizedText word_substitution(const TokenizedText& x_t,
                                const CandidateSet& candidates, Rng& rng) {
  std::vector<std::string> words = x_t.words();
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto& entry = candidates.at(i);
    if (!x_t.attackable(i) || entry.size() < 2) continue;
    words[i] = entry[rng.uniform_index(entry.size())];
  }
  return x_t.with_words(std::move(words));
}

std::optional<TokenizedText> initialize_adversary(
    const TokenizedText& x, const CandidateSet& candidates,
    OracleHandle& handle, const Label& original_label, Rng& rng, bool restart,
    std::vector<TraceEntry>* trace) {
  candidates.check_aligned(x);
  // With no synonyms the only reachable text is x itself.
  if (!candidates.has_alternatives()) return std::nullopt;
  TokenizedText current = x;
  while (!handle.exhausted()) {
    current = word_substitution(restart ? x : current, candidates, rng);
    bool adversarial = handle.is_adversarial(current, original_label);
    if (trace) {
      TraceEntry e;
      e.query = handle.ledger();
      e.op = TraceOp::kInitialize;
      e.positions = perturbed_positions(current, x);
      e.adversarial = adversarial;
      e.accepted = adversarial;
      e.fitness = fitness(current, x, adversarial).value;
      trace->push_back(std::move(e));
    }
    if (adversarial) return current;
  }
  return std::nullopt;
}

LocalSearchResult local_search_step(const TokenizedText& x_adv,
                                    const TokenizedText& x_orig,
                                    const CandidateSet& candidates,
                                    const WeightTable& table,
                                    OracleHandle& handle,
                                    const Label& original_label,
                                    const SearchConfig& config, Rng& rng) {
  auto eligible = perturbed_positions(x_adv, x_orig);
  if (eligible.empty()) return LocalSearchResult{x_adv, {}, false, false};
  if (handle.exhausted()) throw BudgetExhaustedError();

  std::vector<Replacement> replaced;
  if (config.variant == Variant::kMutationForLocalSearch) {
    std::size_t i = eligible[rng.uniform_index(eligible.size())];
    std::size_t from = candidates.index_of(i, x_adv.word(i));
    // Uniform over the other candidates, so the move always changes the text.
    std::size_t to = rng.uniform_index(candidates.at(i).size() - 1);
    if (to >= from) ++to;
    replaced.push_back({i, from, to});
  } else {
    std::size_t limit = std::min(config.delta, eligible.size());
    std::size_t k = rng.uniform_between(1, limit);
    for (std::size_t i : sample_positions(table, eligible, k, rng)) {
      std::size_t from = candidates.index_of(i, x_adv.word(i));
      std::size_t to = draw_replacement(table, candidates, i, config, rng);
      replaced.push_back({i, from, to});
    }
  }

  std::vector<std::string> words = x_adv.words();
  for (const auto& r : replaced) words[r.position] = candidates.word(r.position, r.to);
  TokenizedText next = x_adv.with_words(std::move(words));
  bool adversarial = handle.is_adversarial(next, original_label);
  return LocalSearchResult{adversarial ? std::move(next) : x_adv,
                           std::move(replaced), adversarial, true};
}

std::vector<Member> recombine(const std::vector<Member>& population,
                              const TokenizedText& x_orig,
                              const CandidateSet& candidates,
                              const WeightTable& table, OracleHandle& handle,
                              const Label& original_label, bool weighted,
                              Rng& rng, std::vector<TraceEntry>* trace) {
  std::vector<Member> children;
  if (population.size() < 2) return children;
  const std::size_t count = population.size() / 2;
  for (std::size_t c = 0; c < count && !handle.exhausted(); ++c) {
    std::size_t a = rng.uniform_index(population.size());
    std::size_t b = rng.uniform_index(population.size() - 1);
    if (b >= a) ++b;
    const TokenizedText& xa = population[a].text;
    const TokenizedText& xb = population[b].text;

    std::vector<std::string> words = xa.words();
    std::vector<std::size_t> touched;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (xa.word(i) == xb.word(i)) continue;
      touched.push_back(i);
      double p = 0.5;
      if (weighted) {
        double sa = sigmoid(table.at(i, candidates.index_of(i, xa.word(i))));
        double sb = sigmoid(table.at(i, candidates.index_of(i, xb.word(i))));
        p = sa / (sa + sb);
      }
      if (!rng.bernoulli(p)) words[i] = xb.word(i);
    }
    TokenizedText child = xa.with_words(std::move(words));
    bool adversarial = handle.is_adversarial(child, original_label);
    Fitness f = fitness(child, x_orig, adversarial);
    if (trace) {
      TraceEntry e;
      e.query = handle.ledger();
      e.op = TraceOp::kRecombine;
      e.positions = std::move(touched);
      e.adversarial = adversarial;
      e.accepted = true;
      e.fitness = f.value;
      trace->push_back(std::move(e));
    }
    children.push_back(Member{std::move(child), f, adversarial});
  }
  return children;
}

AttackRecord run_attack(const TokenizedText& x, const CandidateSet& candidates,
                        OracleHandle& handle, const Label& original_label,
                        const SearchConfig& config, Rng& rng) {
  config.validate();
  candidates.check_aligned(x);
  AttackSession session(x, candidates, handle, original_label, config, rng);
  return session.run();
}

AttackRecord run_variant(Variant variant, const TokenizedText& x,
                         const CandidateSet& candidates, OracleHandle& handle,
                         const Label& original_label, SearchConfig config,
                         Rng& rng) {
  config.variant = variant;
  return run_attack(x, candidates, handle, original_label, config, rng);
}

}  // namespace hardlabel
