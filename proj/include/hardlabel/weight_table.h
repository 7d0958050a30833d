#ifndef HARDLABEL_WEIGHT_TABLE_H_
#define HARDLABEL_WEIGHT_TABLE_H_

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "hardlabel/candidates.h"

namespace hardlabel {

inline double sigmoid(double x) {
  // Evaluated on the side that cannot overflow.
  if (x >= 0.0) {
    double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

// One substitution made by a local-search step at `position`: the word moved
// from candidate index `from` (j_t) to `to` (j_{t+1}).
struct Replacement {
  std::size_t position = 0;
  std::size_t from = 0;
  std::size_t to = 0;

  friend bool operator==(const Replacement&, const Replacement&) = default;
};

// Learned importance of every candidate word. Row i has one entry per
// candidate of position i; the row sum is the importance of position i.
// Starts at all zeros.
class WeightTable {
 public:
  WeightTable() = default;
  explicit WeightTable(const CandidateSet& candidates);
  explicit WeightTable(std::vector<std::vector<double>> rows)
      : rows_(std::move(rows)) {}

  std::size_t size() const { return rows_.size(); }
  std::size_t row_size(std::size_t i) const { return rows_.at(i).size(); }
  double at(std::size_t i, std::size_t j) const { return rows_.at(i).at(j); }
  const std::vector<double>& row(std::size_t i) const { return rows_.at(i); }
  const std::vector<std::vector<double>>& rows() const { return rows_; }

  double row_sum(std::size_t i) const;
  double max_abs() const;

  // Reward rules for the positions touched by one local-search step. When the
  // new text is still adversarial: W[i][to] += r, W[i][from] -= 2r.
  // Otherwise: W[i][to] -= r, W[i][from] += 2r.
  // Throws std::out_of_range on an index outside the ragged shape; the table
  // is unchanged in that case.
  void update(std::span<const Replacement> replaced, bool still_adversarial,
              double reward);

  // Copy with every entry divided by max_abs() (all zeros if the table is).
  WeightTable rescaled() const;

  friend bool operator==(const WeightTable&, const WeightTable&) = default;

 private:
  std::vector<std::vector<double>> rows_;
};

// p_i proportional to 1 - sigmoid(row_sum(i)) over the eligible positions.
// Less important positions are more likely. Uniform if every mass underflows.
std::vector<double> position_sampling_probs(const WeightTable& table,
                                            std::span<const std::size_t> eligible);

// p_{i,j} proportional to sigmoid(W[i][j]) over all candidates of position i.
std::vector<double> candidate_sampling_probs(const WeightTable& table,
                                             std::size_t i);

// JSON export: per position the original word, candidates, raw weights,
// rescaled weights and row sum.
void write_weight_export(std::ostream& out, const WeightTable& table,
                         const CandidateSet& candidates);

struct WeightExport {
  WeightTable table;
  CandidateSet candidates;
};

// Parses write_weight_export() output. Throws ParseError.
WeightExport read_weight_export(std::istream& in);

}  // namespace hardlabel

#endif  // HARDLABEL_WEIGHT_TABLE_H_
