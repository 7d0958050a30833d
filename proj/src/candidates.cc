#include "hardlabel/candidates.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_set>

#include "hardlabel/errors.h"

namespace hardlabel {
namespace {

bool parse_double(const std::string& token, double& out) {
  const char* begin = token.c_str();
  char* end = nullptr;
  errno = 0;
  out = std::strtod(begin, &end);
  return end != begin && *end == '\0' && errno != ERANGE && std::isfinite(out);
}

bool is_unsigned_integer(const std::string& token) {
  return !token.empty() &&
         std::all_of(token.begin(), token.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string lowercase(std::string s) {
  for (char& c : s) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return s;
}

}  // namespace

CandidateSet::CandidateSet(std::vector<std::vector<std::string>> entries,
                           std::size_t max_synonyms)
    : entries_(std::move(entries)), max_synonyms_(max_synonyms) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.empty()) {
      throw InvalidArgumentError("empty candidate list at position " +
                                 std::to_string(i));
    }
    if (e.size() > max_synonyms_ + 1) {
      throw InvalidArgumentError("too many candidates at position " +
                                 std::to_string(i));
    }
    std::unordered_set<std::string_view> seen;
    for (const auto& w : e) {
      if (!seen.insert(w).second) {
        throw InvalidArgumentError("duplicate candidate '" + w +
                                   "' at position " + std::to_string(i));
      }
    }
  }
}

std::size_t CandidateSet::index_of(std::size_t i, std::string_view word) const {
  const auto& e = entries_.at(i);
  auto it = std::find(e.begin(), e.end(), word);
  if (it == e.end()) {
    throw InvalidArgumentError("word '" + std::string(word) +
                               "' is not a candidate at position " +
                               std::to_string(i));
  }
  return static_cast<std::size_t>(it - e.begin());
}

bool CandidateSet::has_alternatives() const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [](const auto& e) { return e.size() > 1; });
}

void CandidateSet::check_aligned(const TokenizedText& x) const {
  if (x.size() != entries_.size()) {
    throw InvalidArgumentError("candidate set covers " +
                               std::to_string(entries_.size()) +
                               " positions, text has " +
                               std::to_string(x.size()));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (entries_[i][0] != x.word(i)) {
      throw InvalidArgumentError("candidate list " + std::to_string(i) +
                                 " does not start with the original word");
    }
    if (!x.attackable(i) && entries_[i].size() != 1) {
      throw InvalidArgumentError("masked position " + std::to_string(i) +
                                 " has synonyms");
    }
  }
}

EmbeddingIndex::EmbeddingIndex(std::vector<std::string> words,
                               std::vector<std::vector<double>> vectors)
    : words_(std::move(words)) {
  if (words_.size() != vectors.size()) {
    throw InvalidArgumentError("word and vector counts differ");
  }
  dim_ = vectors.empty() ? 0 : vectors.front().size();
  unit_.reserve(words_.size() * dim_);
  for (std::size_t r = 0; r < vectors.size(); ++r) {
    const auto& v = vectors[r];
    if (v.size() != dim_) {
      throw DimensionError("vector for '" + words_[r] + "' has dimension " +
                           std::to_string(v.size()) + ", expected " +
                           std::to_string(dim_));
    }
    double norm = 0.0;
    for (double c : v) norm += c * c;
    norm = std::sqrt(norm);
    for (double c : v) unit_.push_back(norm > 0.0 ? c / norm : 0.0);
    if (!lookup_.emplace(words_[r], r).second) {
      throw InvalidArgumentError("duplicate vocabulary word '" + words_[r] +
                                 "'");
    }
  }
}

bool EmbeddingIndex::contains(std::string_view word) const {
  return lookup_.contains(std::string(word));
}

double EmbeddingIndex::cosine(std::string_view a, std::string_view b) const {
  auto ia = lookup_.find(std::string(a));
  auto ib = lookup_.find(std::string(b));
  if (ia == lookup_.end() || ib == lookup_.end()) {
    throw InvalidArgumentError("word not in vocabulary");
  }
  const double* va = &unit_[ia->second * dim_];
  const double* vb = &unit_[ib->second * dim_];
  double dot = 0.0;
  for (std::size_t d = 0; d < dim_; ++d) dot += va[d] * vb[d];
  return dot;
}

std::vector<std::string> EmbeddingIndex::nearest(std::string_view word,
                                                 std::size_t k) const {
  auto it = lookup_.find(std::string(word));
  if (it == lookup_.end() || k == 0) return {};
  const std::size_t self = it->second;
  const double* q = &unit_[self * dim_];

  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(words_.size());
  for (std::size_t r = 0; r < words_.size(); ++r) {
    if (r == self) continue;
    const double* v = &unit_[r * dim_];
    double dot = 0.0;
    for (std::size_t d = 0; d < dim_; ++d) dot += q[d] * v[d];
    scored.emplace_back(dot, r);
  }
  auto better = [this](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return words_[a.second] < words_[b.second];
  };
  k = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<long>(k),
                    scored.end(), better);
  std::vector<std::string> out;
  out.reserve(k);
  for (std::size_t r = 0; r < k; ++r) out.push_back(words_[scored[r].second]);
  return out;
}

EmbeddingIndex load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read embedding file: " + path.string());

  std::vector<std::string> words;
  std::vector<std::vector<double>> vectors;
  std::unordered_set<std::string> seen;
  std::size_t skipped = 0;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (line_no == 1 && tokens.size() == 2 && is_unsigned_integer(tokens[0]) &&
        is_unsigned_integer(tokens[1])) {
      continue;  // word2vec-style "<count> <dim>" header
    }
    std::vector<double> v(tokens.size() - 1);
    bool ok = tokens.size() >= 2;
    for (std::size_t t = 1; ok && t < tokens.size(); ++t) {
      ok = parse_double(tokens[t], v[t - 1]);
    }
    if (!ok) {
      ++skipped;
      continue;
    }
    if (dim == 0) {
      dim = v.size();
    } else if (v.size() != dim) {
      throw DimensionError("line " + std::to_string(line_no) + ": dimension " +
                           std::to_string(v.size()) + ", expected " +
                           std::to_string(dim));
    }
    std::string word = lowercase(tokens[0]);
    if (!seen.insert(word).second) {
      ++skipped;
      continue;
    }
    words.push_back(std::move(word));
    vectors.push_back(std::move(v));
  }
  if (words.empty()) {
    throw ParseError("no valid embedding lines in " + path.string());
  }
  if (skipped > 0) {
    std::cerr << "warning: skipped " << skipped << " malformed line(s) in "
              << path.string() << '\n';
  }
  EmbeddingIndex index(std::move(words), std::move(vectors));
  index.skipped_lines_ = skipped;
  return index;
}

CandidateSet build_candidate_sets(const TokenizedText& x,
                                  const EmbeddingIndex& index, std::size_t m) {
  if (m == 0) throw InvalidArgumentError("synonym count must be at least 1");
  std::unordered_map<std::string, std::vector<std::string>> memo;
  std::vector<std::vector<std::string>> entries;
  entries.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::string& w = x.word(i);
    std::vector<std::string> entry{w};
    if (x.attackable(i)) {
      auto it = memo.find(w);
      if (it == memo.end()) it = memo.emplace(w, index.nearest(w, m)).first;
      entry.insert(entry.end(), it->second.begin(), it->second.end());
    }
    entries.push_back(std::move(entry));
  }
  return CandidateSet(std::move(entries), m);
}

SynonymTable::SynonymTable(
    std::unordered_map<std::string, std::vector<std::string>> table,
    std::size_t m)
    : m_(m) {
  if (m == 0) throw InvalidArgumentError("synonym count must be at least 1");
  for (auto& [word, syns] : table) {
    std::vector<std::string> clean;
    std::unordered_set<std::string> seen{word};
    for (auto& s : syns) {
      if (!s.empty() && seen.insert(s).second) clean.push_back(s);
    }
    if (clean.size() > m_) {
      clean.resize(m_);
      ++truncated_;
    }
    table_.emplace(word, std::move(clean));
  }
}

CandidateSet SynonymTable::build(const TokenizedText& x) const {
  std::vector<std::vector<std::string>> entries;
  entries.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<std::string> entry{x.word(i)};
    if (x.attackable(i)) {
      if (auto it = table_.find(x.word(i)); it != table_.end()) {
        entry.insert(entry.end(), it->second.begin(), it->second.end());
      }
    }
    entries.push_back(std::move(entry));
  }
  return CandidateSet(std::move(entries), m_);
}

SynonymTable load_synonym_table(const std::filesystem::path& path,
                                std::size_t m) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read synonym table: " + path.string());
  std::unordered_map<std::string, std::vector<std::string>> table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError("expected 'word<TAB>synonyms'", line_no);
    }
    std::string word = lowercase(trim(std::string_view(line).substr(0, tab)));
    if (word.empty()) throw ParseError("empty headword", line_no);
    std::vector<std::string> syns;
    std::istringstream rest(line.substr(tab + 1));
    std::string s;
    while (std::getline(rest, s, ',')) {
      s = lowercase(trim(s));
      if (!s.empty()) syns.push_back(std::move(s));
    }
    if (table.contains(word)) {
      throw ParseError("duplicate headword '" + word + "'", line_no);
    }
    table.emplace(std::move(word), std::move(syns));
  }
  SynonymTable out(std::move(table), m);
  if (out.truncated_records() > 0) {
    std::cerr << "warning: " << out.truncated_records()
              << " synonym record(s) truncated to " << m << " entries in "
              << path.string() << '\n';
  }
  return out;
}

}  // namespace hardlabel
