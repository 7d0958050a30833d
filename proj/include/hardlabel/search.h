#ifndef HARDLABEL_SEARCH_H_
#define HARDLABEL_SEARCH_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "hardlabel/candidates.h"
#include "hardlabel/oracle.h"
#include "hardlabel/rng.h"
#include "hardlabel/text.h"
#include "hardlabel/weight_table.h"

namespace hardlabel {

// Attack variants. kFull is the complete method; the others each swap one
// mechanism out for the ablation study.
enum class Variant {
  kFull,
  kWeightTableOnly,            // no population or recombination
  kHybridUnweighted,           // uniform position/candidate/parent choice
  kMutationForLocalSearch,     // one uniform position, uniform new word
  kCrossoverForRecombination,  // uniform per-position parent choice
  kRandomSearch,               // uniform candidate draw, no restore bias
  kRandomFlip,                 // sampled positions always restored
};

std::string_view to_string(Variant v);
// Accepts the names produced by to_string(). Throws InvalidArgumentError.
Variant parse_variant(std::string_view name);

// How a sampled position gets its new word during local search.
enum class RestoreMode {
  kHalf,   // restore the original with probability 1/2, else draw by weight
  kJoint,  // draw by weight over all candidates, original included
};

struct SearchConfig {
  std::size_t delta = 5;               // max positions per local-search step
  std::size_t population_size = 4;     // S
  std::size_t local_search_steps = 8;  // N, per member per generation
  std::int64_t budget = 2000;          // T
  std::size_t synonyms = 4;            // m
  double reward = 0.5;                 // r
  double success_threshold = 0.25;     // max perturbation rate for success
  std::uint64_t seed = 0;
  // Restart every initialization draw from the original text instead of
  // chaining substitutions on the previous draw.
  bool restart_initialization = false;
  RestoreMode restore_mode = RestoreMode::kHalf;
  Variant variant = Variant::kFull;
  bool record_trace = false;

  // Throws InvalidArgumentError on out-of-range fields.
  void validate() const;
};

enum class AttackStatus {
  kSuccess,
  kFailedInitialization,
  kFailedThreshold,
  // The budget ran out while the first population was still being built and
  // the best adversary found does not meet the threshold.
  kBudgetExhaustedWithBest,
};

std::string_view to_string(AttackStatus s);
AttackStatus parse_status(std::string_view name);

enum class TraceOp { kInitialize, kLocalSearch, kRecombine };
std::string_view to_string(TraceOp op);
TraceOp parse_trace_op(std::string_view name);

// One oracle call.
struct TraceEntry {
  std::int64_t query = 0;  // ledger value after the call
  TraceOp op = TraceOp::kInitialize;
  std::vector<std::size_t> positions;     // positions touched
  std::vector<Replacement> replacements;  // local search only
  bool adversarial = false;               // verdict on the evaluated text
  bool accepted = false;                  // text kept by the operator
  double fitness = 0.0;                   // of the evaluated text
  bool weights_updated = false;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct AttackRecord {
  AttackStatus status = AttackStatus::kFailedInitialization;
  TokenizedText original;
  Label original_label;
  std::optional<TokenizedText> adversary;
  std::optional<TokenizedText> initial_adversary;
  double perturbation = 0.0;  // of `adversary`; 0 when absent
  std::size_t perturbed_words = 0;
  std::int64_t queries = 0;
  std::size_t generations = 0;
  WeightTable weights;
  CandidateSet candidates;
  std::vector<TraceEntry> trace;
};

// Population member. `adversarial` is tracked separately from fitness since
// fitness is 0 both for benign texts and for fully substituted adversaries.
struct Member {
  TokenizedText text;
  Fitness fitness;
  bool adversarial = false;
};

// Replaces every attackable position with a uniform draw from its candidates
// (the current word included).
TokenizedText word_substitution(const TokenizedText& x_t,
                                const CandidateSet& candidates, Rng& rng);

// Random-walk search for any adversarial text. Each draw substitutes on the
// previous draw (or on `x` when `restart`). Returns nullopt once the budget is
// spent without a hit, or at once if no position has a synonym.
std::optional<TokenizedText> initialize_adversary(
    const TokenizedText& x, const CandidateSet& candidates,
    OracleHandle& handle, const Label& original_label, Rng& rng,
    bool restart = false, std::vector<TraceEntry>* trace = nullptr);

struct LocalSearchResult {
  TokenizedText text;                 // new text if adversarial, else input
  std::vector<Replacement> replaced;  // for the weight update
  bool adversarial = false;           // verdict on the new text
  bool evaluated = false;             // false for a no-op (nothing perturbed)
};

// One local-search move from `x_adv`: resample up to delta perturbed
// positions, query once, keep the result only if it is adversarial.
// Throws BudgetExhaustedError if called with no budget left.
LocalSearchResult local_search_step(const TokenizedText& x_adv,
                                    const TokenizedText& x_orig,
                                    const CandidateSet& candidates,
                                    const WeightTable& table,
                                    OracleHandle& handle,
                                    const Label& original_label,
                                    const SearchConfig& config, Rng& rng);

// floor(|P|/2) children, each mixing two distinct random members position by
// position with odds sigmoid(W[i][j_a]) : sigmoid(W[i][j_b]) (even odds when
// `weighted` is false). Each child costs one query; generation stops early
// when the budget runs out.
std::vector<Member> recombine(const std::vector<Member>& population,
                              const TokenizedText& x_orig,
                              const CandidateSet& candidates,
                              const WeightTable& table, OracleHandle& handle,
                              const Label& original_label, bool weighted,
                              Rng& rng, std::vector<TraceEntry>* trace = nullptr);

// Full two-stage attack: initialization, then hybrid local search until the
// budget is spent. `original_label` is f(x) as already observed.
AttackRecord run_attack(const TokenizedText& x, const CandidateSet& candidates,
                        OracleHandle& handle, const Label& original_label,
                        const SearchConfig& config, Rng& rng);

// run_attack() with config.variant replaced by `variant`.
AttackRecord run_variant(Variant variant, const TokenizedText& x,
                         const CandidateSet& candidates, OracleHandle& handle,
                         const Label& original_label, SearchConfig config,
                         Rng& rng);

}  // namespace hardlabel

#endif  // HARDLABEL_SEARCH_H_
