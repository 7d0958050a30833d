#ifndef HARDLABEL_RECORD_IO_H_
#define HARDLABEL_RECORD_IO_H_

#include <filesystem>
#include <iosfwd>
#include <json.hpp>

#include "hardlabel/search.h"

namespace hardlabel {

nlohmann::json text_to_json(const TokenizedText& x);
TokenizedText text_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const SearchConfig& c);

nlohmann::json trace_entry_to_json(const TraceEntry& e);

// Full record: texts, candidates, weight snapshot and trace.
nlohmann::json record_to_json(const AttackRecord& r);
// Throws ParseError.
AttackRecord record_from_json(const nlohmann::json& j);

// One JSON object per line, one line per oracle call.
void write_trace(std::ostream& out, const std::vector<TraceEntry>& trace);

// Weight export (see write_weight_export) for a record's snapshot.
// Throws IoError.
void export_weight_table(const AttackRecord& record,
                         const std::filesystem::path& path);

}  // namespace hardlabel

#endif  // HARDLABEL_RECORD_IO_H_
