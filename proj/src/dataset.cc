#include "hardlabel/dataset.h"

#include <fstream>
#include <json.hpp>

#include "hardlabel/errors.h"

namespace hardlabel {
namespace {

using nlohmann::json;

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

Label label_from_json(const json& v, std::size_t line_no) {
  if (v.is_number_integer()) return Label::of(v.get<long long>());
  if (v.is_string()) return Label{v.get<std::string>()};
  throw ParseError("\"label\" must be an integer", line_no);
}

Sample parse_jsonl_line(const std::string& line, std::size_t line_no) {
  json doc = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ParseError("not a JSON object", line_no);
  }
  if (!doc.contains("label")) throw ParseError("missing \"label\"", line_no);
  Sample s;
  s.line = line_no;
  s.label = label_from_json(doc["label"], line_no);
  auto get_text = [&](const char* key) {
    const json& v = doc[key];
    if (!v.is_string() || v.get<std::string>().empty()) {
      throw ParseError(std::string("\"") + key + "\" must be a non-empty string",
                       line_no);
    }
    return v.get<std::string>();
  };
  if (doc.contains("premise") || doc.contains("hypothesis")) {
    s.is_pair = true;
    s.premise = get_text("premise");
    s.hypothesis = get_text("hypothesis");
  } else if (doc.contains("text")) {
    s.text = get_text("text");
  } else {
    throw ParseError("missing \"text\"", line_no);
  }
  return s;
}

Sample parse_tsv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    cols.push_back(line.substr(start, tab == std::string::npos
                                          ? std::string::npos
                                          : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  if (cols.size() < 2 || cols.size() > 3) {
    throw ParseError("expected label<TAB>text or label<TAB>premise<TAB>hypothesis",
                     line_no);
  }
  Sample s;
  s.line = line_no;
  if (cols[0].empty()) throw ParseError("empty label", line_no);
  s.label = Label{cols[0]};
  for (std::size_t c = 1; c < cols.size(); ++c) {
    if (blank(cols[c])) throw ParseError("empty text column", line_no);
  }
  if (cols.size() == 3) {
    s.is_pair = true;
    s.premise = cols[1];
    s.hypothesis = cols[2];
  } else {
    s.text = cols[1];
  }
  return s;
}

}  // namespace

DatasetFormat parse_dataset_format(std::string_view name) {
  if (name == "tsv") return DatasetFormat::kTsv;
  if (name == "jsonl") return DatasetFormat::kJsonl;
  throw InvalidArgumentError("unknown dataset format '" + std::string(name) +
                             "'");
}

DatasetFormat guess_dataset_format(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  return ext == ".jsonl" || ext == ".json" ? DatasetFormat::kJsonl
                                           : DatasetFormat::kTsv;
}

Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read dataset: " + path.string());
  Dataset ds;
  ds.name = path.stem().string();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line)) continue;
    ds.samples.push_back(format == DatasetFormat::kJsonl
                             ? parse_jsonl_line(line, line_no)
                             : parse_tsv_line(line, line_no));
  }
  if (ds.samples.empty()) {
    throw EmptyInputError("dataset has no samples: " + path.string());
  }
  return ds;
}

TokenizedText to_text(const Sample& sample, const StopwordSet& stopwords,
                      AttackSegment segment) {
  if (sample.is_pair) {
    return tokenize_pair(sample.premise, sample.hypothesis, stopwords, segment);
  }
  return tokenize(sample.text, stopwords);
}

}  // namespace hardlabel
