#ifndef HARDLABEL_DATASET_H_
#define HARDLABEL_DATASET_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hardlabel/text.h"

namespace hardlabel {

struct Sample {
  std::string text;  // single-text samples
  std::string premise;
  std::string hypothesis;
  bool is_pair = false;
  Label label;
  std::size_t line = 0;  // source line, 1-based
};

struct Dataset {
  std::string name;
  std::vector<Sample> samples;
};

enum class DatasetFormat { kTsv, kJsonl };

// "tsv" or "jsonl". Throws InvalidArgumentError.
DatasetFormat parse_dataset_format(std::string_view name);
// From the file extension (.jsonl/.json -> jsonl, anything else -> tsv).
DatasetFormat guess_dataset_format(const std::filesystem::path& path);

// TSV: "label<TAB>text" or "label<TAB>premise<TAB>hypothesis".
// JSONL: {"text": ..., "label": int} or {"premise", "hypothesis", "label"}.
// Throws ParseError naming the line, or EmptyInputError for no samples.
Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format);

TokenizedText to_text(const Sample& sample, const StopwordSet& stopwords,
                      AttackSegment segment = AttackSegment::kHypothesis);

}  // namespace hardlabel

#endif  // HARDLABEL_DATASET_H_
