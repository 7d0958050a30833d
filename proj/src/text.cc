#include "hardlabel/text.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "hardlabel/errors.h"

namespace hardlabel {
namespace {

// Generated from data/stopwords.txt at configure time.
constexpr std::string_view kStopwordData =
#include "stopwords_data.inc"
    ;

bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

// ASCII punctuation only; bytes >= 0x80 (UTF-8 sequences) count as word
// characters.
bool is_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

bool is_word_char(char c) { return !is_space(c) && !is_punct(c); }

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_punctuation_token(const std::string& token) {
  return std::all_of(token.begin(), token.end(), is_punct);
}

// Digits with optional internal separators: "42", "3.5", "1,000".
bool is_numeric_token(const std::string& token) {
  bool saw_digit = false;
  for (char c : token) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      saw_digit = true;
    } else if (c != '.' && c != ',') {
      return false;
    }
  }
  return saw_digit;
}

StopwordSet parse_stopwords(std::istream& in) {
  StopwordSet set;
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r");
    set.insert(lowercase(std::string_view(line).substr(first, last - first + 1)));
  }
  return set;
}

struct RawTokens {
  std::vector<std::string> words;
  std::vector<bool> space_before;
};

// A punctuation character stays inside a word when it sits between two word
// characters ("don't", "well-known", "3.5"); otherwise it is its own token.
RawTokens split(std::string_view raw) {
  RawTokens out;
  bool pending_space = false;
  std::size_t i = 0;
  while (i < raw.size()) {
    char c = raw[i];
    if (is_space(c)) {
      pending_space = true;
      ++i;
      continue;
    }
    std::size_t start = i;
    if (is_punct(c)) {
      ++i;
    } else {
      while (i < raw.size()) {
        if (is_word_char(raw[i])) {
          ++i;
        } else if (is_punct(raw[i]) && i + 1 < raw.size() &&
                   is_word_char(raw[i + 1]) && i > start) {
          i += 2;
        } else {
          break;
        }
      }
    }
    out.space_before.push_back(pending_space && !out.words.empty());
    out.words.push_back(lowercase(raw.substr(start, i - start)));
    pending_space = false;
  }
  return out;
}

std::vector<bool> attackability(const std::vector<std::string>& words,
                                const StopwordSet& stopwords) {
  std::vector<bool> mask(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto& w = words[i];
    mask[i] = !stopwords.contains(w) && !is_punctuation_token(w) &&
              !is_numeric_token(w);
  }
  return mask;
}

}  // namespace

TokenizedText::TokenizedText(std::vector<std::string> words,
                             std::vector<bool> attackable, std::string raw,
                             std::vector<bool> space_before,
                             std::size_t segment_start)
    : words_(std::move(words)),
      attackable_(std::move(attackable)),
      space_before_(std::move(space_before)),
      raw_(std::move(raw)),
      segment_start_(segment_start) {
  if (attackable_.size() != words_.size()) {
    throw LengthMismatchError(words_.size(), attackable_.size());
  }
  if (space_before_.empty()) {
    space_before_.assign(words_.size(), true);
    if (!space_before_.empty()) space_before_[0] = false;
  } else if (space_before_.size() != words_.size()) {
    throw LengthMismatchError(words_.size(), space_before_.size());
  }
  if (segment_start_ > words_.size()) {
    throw InvalidArgumentError("segment start past end of text");
  }
}

TokenizedText TokenizedText::from_words(std::vector<std::string> words) {
  std::vector<bool> mask(words.size(), true);
  return TokenizedText(std::move(words), std::move(mask));
}

TokenizedText TokenizedText::with_words(std::vector<std::string> words) const {
  if (words.size() != words_.size()) {
    throw LengthMismatchError(words_.size(), words.size());
  }
  TokenizedText out = *this;
  out.words_ = std::move(words);
  return out;
}

const StopwordSet& default_stopwords() {
  static const StopwordSet set = [] {
    std::istringstream in{std::string(kStopwordData)};
    return parse_stopwords(in);
  }();
  return set;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read stopword list: " + path.string());
  return parse_stopwords(in);
}

TokenizedText tokenize(std::string_view raw, const StopwordSet& stopwords) {
  RawTokens tokens = split(raw);
  if (tokens.words.empty()) throw EmptyInputError("text has no tokens");
  auto mask = attackability(tokens.words, stopwords);
  return TokenizedText(std::move(tokens.words), std::move(mask),
                       std::string(raw), std::move(tokens.space_before));
}

TokenizedText tokenize_pair(std::string_view premise,
                            std::string_view hypothesis,
                            const StopwordSet& stopwords,
                            AttackSegment segment) {
  RawTokens first = split(premise);
  RawTokens second = split(hypothesis);
  if (first.words.empty() || second.words.empty()) {
    throw EmptyInputError("sentence pair has an empty segment");
  }
  auto first_mask = attackability(first.words, stopwords);
  auto second_mask = attackability(second.words, stopwords);
  if (segment == AttackSegment::kHypothesis) {
    first_mask.assign(first_mask.size(), false);
  } else if (segment == AttackSegment::kPremise) {
    second_mask.assign(second_mask.size(), false);
  }
  std::size_t boundary = first.words.size();
  auto words = std::move(first.words);
  words.insert(words.end(), second.words.begin(), second.words.end());
  auto mask = std::move(first_mask);
  mask.insert(mask.end(), second_mask.begin(), second_mask.end());
  auto spaces = std::move(first.space_before);
  second.space_before[0] = false;
  spaces.insert(spaces.end(), second.space_before.begin(),
                second.space_before.end());
  std::string raw(premise);
  raw += '\n';
  raw += hypothesis;
  return TokenizedText(std::move(words), std::move(mask), std::move(raw),
                       std::move(spaces), boundary);
}

std::string detokenize(const TokenizedText& x, std::size_t begin,
                       std::size_t end) {
  std::string out;
  end = std::min(end, x.size());
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin && x.space_before(i)) out += ' ';
    out += x.word(i);
  }
  return out;
}

std::string detokenize(const TokenizedText& x) {
  if (!x.is_pair()) return detokenize(x, 0, x.size());
  return detokenize(x, 0, x.segment_start()) + '\n' +
         detokenize(x, x.segment_start(), x.size());
}

std::size_t count_differences(const TokenizedText& a, const TokenizedText& b) {
  if (a.size() != b.size()) throw LengthMismatchError(a.size(), b.size());
  std::size_t diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.word(i) != b.word(i)) ++diff;
  }
  return diff;
}

double perturbation_rate(const TokenizedText& x_adv, const TokenizedText& x) {
  std::size_t diff = count_differences(x_adv, x);
  if (x.empty()) throw InvalidArgumentError("perturbation rate of empty text");
  return static_cast<double>(diff) / static_cast<double>(x.size());
}

Fitness fitness(const TokenizedText& x_prime, const TokenizedText& x,
                bool label_differs) {
  double d = perturbation_rate(x_prime, x);
  if (!label_differs) return Fitness{0.0};
  return Fitness{1.0 - d};
}

}  // namespace hardlabel
