#ifndef HARDLABEL_ORACLE_H_
#define HARDLABEL_ORACLE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hardlabel/candidates.h"
#include "hardlabel/text.h"

namespace hardlabel {

// A label-only classifier. Implementations must be deterministic for a fixed
// input, or the oracle handle's cache must be enabled to make them so.
class Victim {
 public:
  virtual ~Victim() = default;
  virtual Label classify(const TokenizedText& x) = 0;
};

// Bag-of-words linear scorer: positive ("1") iff sum of word weights plus bias
// is strictly greater than 0, negative ("0") otherwise.
class LinearBagVictim : public Victim {
 public:
  static inline const Label kPositive = Label{"1"};
  static inline const Label kNegative = Label{"0"};

  LinearBagVictim() = default;
  LinearBagVictim(std::unordered_map<std::string, double> weights, double bias)
      : weights_(std::move(weights)), bias_(bias) {}

  double weight(const std::string& word) const;
  double bias() const { return bias_; }
  const std::unordered_map<std::string, double>& weights() const {
    return weights_;
  }

  double score(const TokenizedText& x) const;
  Label label_of(const TokenizedText& x) const;
  Label classify(const TokenizedText& x) override { return label_of(x); }

 private:
  std::unordered_map<std::string, double> weights_;
  double bias_ = 0.0;
};

// "word<TAB>weight" per line plus one "__bias__<TAB>value" line.
// Throws IoError or ParseError.
LinearBagVictim load_linear_victim(const std::filesystem::path& path);

// Ragged (n, m_i + 1) matrix; rows follow the candidate set.
using RaggedMatrix = std::vector<std::vector<double>>;

// Ground truth for validation only: entry (i, j) = score(x) - score(x with
// position i replaced by candidate j). Column 0 is zero by construction.
RaggedMatrix true_word_importance(const LinearBagVictim& victim,
                                  const TokenizedText& x,
                                  const CandidateSet& candidates);

// One attack session's access to a victim: a monotone query ledger with a
// hard budget. Not thread-safe; one handle per session.
class OracleHandle {
 public:
  struct Options {
    // Count the query that establishes f(x) against the budget.
    bool charge_original_query = false;
    // Serve repeated texts from memory. Cached answers still cost a query.
    bool cache = true;
  };

  OracleHandle(Victim& victim, std::int64_t budget)
      : OracleHandle(victim, budget, Options{}) {}
  OracleHandle(Victim& victim, std::int64_t budget, Options options);

  std::int64_t ledger() const { return ledger_; }
  std::int64_t budget() const { return budget_; }
  std::int64_t remaining() const { return budget_ - ledger_; }
  bool exhausted() const { return ledger_ >= budget_; }
  // Victim calls made outside the ledger (uncharged original query).
  std::int64_t setup_queries() const { return setup_queries_; }
  // Calls that actually reached the victim.
  std::int64_t victim_calls() const { return victim_calls_; }

  // Establishes f(x). Charged only if Options::charge_original_query.
  Label classify_original(const TokenizedText& x);

  // f(x) for one query. Throws BudgetExhaustedError without contacting the
  // victim when ledger == budget.
  Label query(const TokenizedText& x);

  // query(x) != original_label, one query.
  bool is_adversarial(const TokenizedText& x, const Label& original_label);

 private:
  Label lookup(const TokenizedText& x);

  Victim* victim_;
  std::int64_t budget_;
  Options options_;
  std::int64_t ledger_ = 0;
  std::int64_t setup_queries_ = 0;
  std::int64_t victim_calls_ = 0;
  std::unordered_map<std::string, Label> cache_;
};

}  // namespace hardlabel

#endif  // HARDLABEL_ORACLE_H_
