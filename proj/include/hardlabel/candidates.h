#ifndef HARDLABEL_CANDIDATES_H_
#define HARDLABEL_CANDIDATES_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hardlabel/text.h"

namespace hardlabel {

// Legal substitutions per position: entries[i][0] is the original word,
// entries[i][1..] its synonyms. Positions that may not be attacked carry the
// original word alone.
class CandidateSet {
 public:
  CandidateSet() = default;
  // Throws InvalidArgumentError on an empty entry, a duplicate word within an
  // entry, or an entry longer than max_synonyms + 1.
  CandidateSet(std::vector<std::vector<std::string>> entries,
               std::size_t max_synonyms);

  std::size_t size() const { return entries_.size(); }
  std::size_t max_synonyms() const { return max_synonyms_; }
  const std::vector<std::vector<std::string>>& entries() const {
    return entries_;
  }
  const std::vector<std::string>& at(std::size_t i) const {
    return entries_.at(i);
  }
  const std::string& word(std::size_t i, std::size_t j) const {
    return entries_.at(i).at(j);
  }
  // m_i: number of synonyms at position i.
  std::size_t synonym_count(std::size_t i) const {
    return entries_.at(i).size() - 1;
  }
  // Index j of `word` in entries[i]. Throws InvalidArgumentError if absent.
  std::size_t index_of(std::size_t i, std::string_view word) const;

  // True if at least one position has a synonym.
  bool has_alternatives() const;

  // Checks entries[i][0] == x_i and that masked positions are singletons.
  // Throws InvalidArgumentError otherwise.
  void check_aligned(const TokenizedText& x) const;

  friend bool operator==(const CandidateSet&, const CandidateSet&) = default;

 private:
  std::vector<std::vector<std::string>> entries_;
  std::size_t max_synonyms_ = 0;
};

// Builds candidate sets for a text. Implementations are read-only after
// construction and may be shared between threads.
class CandidateProvider {
 public:
  virtual ~CandidateProvider() = default;
  virtual CandidateSet build(const TokenizedText& x) const = 0;
};

// Dense word vectors with exact-match lowercase lookup.
class EmbeddingIndex {
 public:
  EmbeddingIndex() = default;

  // Throws DimensionError if vectors differ in length, InvalidArgumentError
  // on duplicate words or mismatched sizes.
  EmbeddingIndex(std::vector<std::string> words,
                 std::vector<std::vector<double>> vectors);

  std::size_t size() const { return words_.size(); }
  std::size_t dimension() const { return dim_; }
  bool contains(std::string_view word) const;
  const std::vector<std::string>& vocabulary() const { return words_; }
  // Lines skipped while loading (unparseable numbers, empty word).
  std::size_t skipped_lines() const { return skipped_lines_; }

  double cosine(std::string_view a, std::string_view b) const;

  // The k most cosine-similar vocabulary words to `word`, excluding `word`
  // itself, ties broken lexicographically. Empty if `word` is unknown.
  std::vector<std::string> nearest(std::string_view word, std::size_t k) const;

 private:
  friend EmbeddingIndex load_embeddings(const std::filesystem::path& path);

  std::vector<std::string> words_;
  std::vector<double> unit_;  // row-major, L2-normalized (zero rows stay zero)
  std::unordered_map<std::string, std::size_t> lookup_;
  std::size_t dim_ = 0;
  std::size_t skipped_lines_ = 0;
};

// Reads "word v1 ... vD" lines. A leading "<count> <dim>" header is skipped.
// Throws IoError, DimensionError (inconsistent D) or ParseError (no valid
// lines).
EmbeddingIndex load_embeddings(const std::filesystem::path& path);

// Original word followed by its m nearest neighbors, for attackable
// in-vocabulary positions.
CandidateSet build_candidate_sets(const TokenizedText& x,
                                  const EmbeddingIndex& index, std::size_t m);

class EmbeddingCandidates : public CandidateProvider {
 public:
  EmbeddingCandidates(const EmbeddingIndex& index, std::size_t m)
      : index_(index), m_(m) {}
  CandidateSet build(const TokenizedText& x) const override {
    return build_candidate_sets(x, index_, m_);
  }

 private:
  const EmbeddingIndex& index_;
  std::size_t m_;
};

// Precomputed synonyms, one "word<TAB>syn1,syn2,..." record per line.
class SynonymTable : public CandidateProvider {
 public:
  SynonymTable(std::unordered_map<std::string, std::vector<std::string>> table,
               std::size_t m);

  CandidateSet build(const TokenizedText& x) const override;

  std::size_t size() const { return table_.size(); }
  std::size_t max_synonyms() const { return m_; }
  // Records cut down to m synonyms while loading.
  std::size_t truncated_records() const { return truncated_; }

 private:
  friend SynonymTable load_synonym_table(const std::filesystem::path& path,
                                         std::size_t m);

  std::unordered_map<std::string, std::vector<std::string>> table_;
  std::size_t m_;
  std::size_t truncated_ = 0;
};

// Throws IoError or ParseError (with line number).
SynonymTable load_synonym_table(const std::filesystem::path& path,
                                std::size_t m);

}  // namespace hardlabel

#endif  // HARDLABEL_CANDIDATES_H_
