#include "hardlabel/weight_table.h"

#include <algorithm>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <stdexcept>

#include "hardlabel/errors.h"

namespace hardlabel {

using nlohmann::json;

WeightTable::WeightTable(const CandidateSet& candidates)
    : rows_(candidates.size()) {
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    rows_[i].assign(candidates.at(i).size(), 0.0);
  }
}

double WeightTable::row_sum(std::size_t i) const {
  double s = 0.0;
  for (double w : rows_.at(i)) s += w;
  return s;
}

double WeightTable::max_abs() const {
  double m = 0.0;
  for (const auto& row : rows_) {
    for (double w : row) m = std::max(m, std::abs(w));
  }
  return m;
}

void WeightTable::update(std::span<const Replacement> replaced,
                         bool still_adversarial, double reward) {
  for (const auto& r : replaced) {
    if (r.position >= rows_.size() || r.from >= rows_[r.position].size() ||
        r.to >= rows_[r.position].size()) {
      throw std::out_of_range("weight update index outside table");
    }
  }
  const double to_delta = still_adversarial ? reward : -reward;
  const double from_delta = still_adversarial ? -2.0 * reward : 2.0 * reward;
  for (const auto& r : replaced) {
    rows_[r.position][r.to] += to_delta;
    rows_[r.position][r.from] += from_delta;
  }
}

WeightTable WeightTable::rescaled() const {
  WeightTable out = *this;
  const double m = max_abs();
  for (auto& row : out.rows_) {
    for (double& w : row) w = m > 0.0 ? w / m : 0.0;
  }
  return out;
}

std::vector<double> position_sampling_probs(
    const WeightTable& table, std::span<const std::size_t> eligible) {
  if (eligible.empty()) {
    throw InvalidArgumentError("no eligible positions to sample");
  }
  std::vector<double> p(eligible.size());
  double total = 0.0;
  for (std::size_t k = 0; k < eligible.size(); ++k) {
    // 1 - sigmoid(s) == sigmoid(-s), without cancellation for large s.
    p[k] = sigmoid(-table.row_sum(eligible[k]));
    total += p[k];
  }
  if (!(total > 0.0)) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
    return p;
  }
  for (double& v : p) v /= total;
  return p;
}

std::vector<double> candidate_sampling_probs(const WeightTable& table,
                                             std::size_t i) {
  const auto& row = table.row(i);
  std::vector<double> p(row.size());
  double total = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    p[j] = sigmoid(row[j]);
    total += p[j];
  }
  for (double& v : p) v /= total;
  return p;
}

void write_weight_export(std::ostream& out, const WeightTable& table,
                         const CandidateSet& candidates) {
  if (table.size() != candidates.size()) {
    throw LengthMismatchError(table.size(), candidates.size());
  }
  const WeightTable scaled = table.rescaled();
  json positions = json::array();
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table.row_size(i) != candidates.at(i).size()) {
      throw LengthMismatchError(table.row_size(i), candidates.at(i).size());
    }
    positions.push_back({{"index", i},
                         {"original", candidates.word(i, 0)},
                         {"candidates", candidates.at(i)},
                         {"weights", table.row(i)},
                         {"rescaled", scaled.row(i)},
                         {"row_sum", table.row_sum(i)}});
  }
  json doc = {{"max_abs", table.max_abs()},
              {"max_synonyms", candidates.max_synonyms()},
              {"positions", std::move(positions)}};
  out << doc.dump(2) << '\n';
}

WeightExport read_weight_export(std::istream& in) {
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw ParseError("weight export is not JSON");
  try {
    std::vector<std::vector<double>> rows;
    std::vector<std::vector<std::string>> entries;
    for (const auto& p : doc.at("positions")) {
      rows.push_back(p.at("weights").get<std::vector<double>>());
      entries.push_back(p.at("candidates").get<std::vector<std::string>>());
    }
    auto m = doc.at("max_synonyms").get<std::size_t>();
    return WeightExport{WeightTable(std::move(rows)),
                        CandidateSet(std::move(entries), m)};
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed weight export: ") + e.what());
  }
}

}  // namespace hardlabel
