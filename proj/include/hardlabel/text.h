#ifndef HARDLABEL_TEXT_H_
#define HARDLABEL_TEXT_H_

#include <compare>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace hardlabel {

using StopwordSet = std::unordered_set<std::string>;

// Opaque class identifier. Integer labels are carried as their decimal text.
struct Label {
  std::string value;

  static Label of(long long v) { return Label{std::to_string(v)}; }
  friend bool operator==(const Label&, const Label&) = default;
};

// A word sequence plus the per-position mask of words an attack may touch.
//
// Instances are values: operators never mutate a text in place, they derive a
// new one with with_words(), which keeps the mask and spacing provenance.
class TokenizedText {
 public:
  TokenizedText() = default;

  // Builds a text from already-split words. `space_before` defaults to a
  // single space between consecutive words. `segment_start` > 0 marks a
  // sentence pair whose second segment begins at that index.
  TokenizedText(std::vector<std::string> words, std::vector<bool> attackable,
                std::string raw = {}, std::vector<bool> space_before = {},
                std::size_t segment_start = 0);

  // All positions attackable.
  static TokenizedText from_words(std::vector<std::string> words);

  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::vector<std::string>& words() const { return words_; }
  const std::string& word(std::size_t i) const { return words_.at(i); }
  bool attackable(std::size_t i) const { return attackable_.at(i); }
  const std::vector<bool>& attackable_mask() const { return attackable_; }
  bool space_before(std::size_t i) const { return space_before_.at(i); }
  const std::string& raw() const { return raw_; }

  bool is_pair() const { return segment_start_ > 0; }
  std::size_t segment_start() const { return segment_start_; }

  // Same mask, spacing and raw provenance with a replaced word sequence.
  // Throws LengthMismatchError if the length changes.
  TokenizedText with_words(std::vector<std::string> words) const;

  friend bool operator==(const TokenizedText& a, const TokenizedText& b) {
    return a.words_ == b.words_ && a.attackable_ == b.attackable_;
  }

 private:
  std::vector<std::string> words_;
  std::vector<bool> attackable_;
  std::vector<bool> space_before_;
  std::string raw_;
  std::size_t segment_start_ = 0;
};

// Which side of a sentence pair may be perturbed.
enum class AttackSegment { kHypothesis, kPremise, kBoth };

// Built-in English stopword list (the contents of data/stopwords.txt).
const StopwordSet& default_stopwords();

// One word per line; blank lines and lines starting with '#' are ignored.
StopwordSet load_stopwords(const std::filesystem::path& path);

// Whitespace split, punctuation separation and ASCII lowercasing. Stopwords,
// punctuation-only tokens and numerals are marked non-attackable.
// Throws EmptyInputError when no token remains.
TokenizedText tokenize(std::string_view raw, const StopwordSet& stopwords);

// Premise and hypothesis as one text; positions outside `segment` are masked.
TokenizedText tokenize_pair(std::string_view premise,
                            std::string_view hypothesis,
                            const StopwordSet& stopwords,
                            AttackSegment segment = AttackSegment::kHypothesis);

// Joins words using the recorded spacing; the inverse of tokenize() up to
// whitespace normalization and lowercasing.
std::string detokenize(const TokenizedText& x);
std::string detokenize(const TokenizedText& x, std::size_t begin,
                       std::size_t end);

// Number of positions where the two texts differ.
std::size_t count_differences(const TokenizedText& a, const TokenizedText& b);

// d(a, b) = (1/n) * #{i : a_i != b_i}.
double perturbation_rate(const TokenizedText& x_adv, const TokenizedText& x);

// Fitness alone does not identify adversaries: an adversary that changes
// every position scores 0, like a benign text.
struct Fitness {
  double value = 0.0;

  friend auto operator<=>(const Fitness&, const Fitness&) = default;
};

// F(x') = 1[label differs] * (1 - d(x', x)). Query-free: the caller supplies
// the oracle verdict.
Fitness fitness(const TokenizedText& x_prime, const TokenizedText& x,
                bool label_differs);

}  // namespace hardlabel

#endif  // HARDLABEL_TEXT_H_
