#include "hardlabel/oracle.h"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include "hardlabel/errors.h"

namespace hardlabel {
namespace {

constexpr std::string_view kBiasKey = "__bias__";

// Cache key: words joined with a separator that tokenize() never emits, plus
// the pair boundary.
std::string cache_key(const TokenizedText& x) {
  std::string key = std::to_string(x.segment_start());
  for (const auto& w : x.words()) {
    key += '\x1f';
    key += w;
  }
  return key;
}

}  // namespace

double LinearBagVictim::weight(const std::string& word) const {
  auto it = weights_.find(word);
  return it == weights_.end() ? 0.0 : it->second;
}

double LinearBagVictim::score(const TokenizedText& x) const {
  double s = bias_;
  for (const auto& w : x.words()) s += weight(w);
  return s;
}

Label LinearBagVictim::label_of(const TokenizedText& x) const {
  return score(x) > 0.0 ? kPositive : kNegative;
}

LinearBagVictim load_linear_victim(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read victim weights: " + path.string());
  std::unordered_map<std::string, double> weights;
  double bias = 0.0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw ParseError("expected 'word<TAB>weight'", line_no);
    }
    std::string word = line.substr(0, tab);
    std::string num = line.substr(tab + 1);
    char* end = nullptr;
    errno = 0;
    double value = std::strtod(num.c_str(), &end);
    if (end == num.c_str() || *end != '\0' || errno == ERANGE ||
        !std::isfinite(value)) {
      throw ParseError("bad weight '" + num + "'", line_no);
    }
    if (word == kBiasKey) {
      bias = value;
    } else {
      weights[word] = value;
    }
  }
  return LinearBagVictim(std::move(weights), bias);
}

RaggedMatrix true_word_importance(const LinearBagVictim& victim,
                                  const TokenizedText& x,
                                  const CandidateSet& candidates) {
  candidates.check_aligned(x);
  const double base = victim.score(x);
  RaggedMatrix out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& entry = candidates.at(i);
    out[i].assign(entry.size(), 0.0);
    for (std::size_t j = 1; j < entry.size(); ++j) {
      auto words = x.words();
      words[i] = entry[j];
      out[i][j] = base - victim.score(x.with_words(std::move(words)));
    }
  }
  return out;
}

OracleHandle::OracleHandle(Victim& victim, std::int64_t budget,
                           Options options)
    : victim_(&victim), budget_(budget), options_(options) {
  if (budget < 0) throw InvalidArgumentError("query budget must be >= 0");
}

Label OracleHandle::lookup(const TokenizedText& x) {
  if (!options_.cache) {
    ++victim_calls_;
    return victim_->classify(x);
  }
  std::string key = cache_key(x);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  ++victim_calls_;
  Label label = victim_->classify(x);
  cache_.emplace(std::move(key), label);
  return label;
}

Label OracleHandle::classify_original(const TokenizedText& x) {
  if (options_.charge_original_query) return query(x);
  Label label = lookup(x);
  ++setup_queries_;
  return label;
}

Label OracleHandle::query(const TokenizedText& x) {
  if (exhausted()) throw BudgetExhaustedError();
  // A failed victim call does not consume budget.
  Label label = lookup(x);
  ++ledger_;
  return label;
}

bool OracleHandle::is_adversarial(const TokenizedText& x,
                                  const Label& original_label) {
  return query(x) != original_label;
}

}  // namespace hardlabel
