#include "hardlabel/record_io.h"

#include <fstream>
#include <ostream>

#include "hardlabel/errors.h"

namespace hardlabel {

using nlohmann::json;

json text_to_json(const TokenizedText& x) {
  std::vector<bool> spaces(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) spaces[i] = x.space_before(i);
  return {{"words", x.words()},
          {"attackable", x.attackable_mask()},
          {"space_before", spaces},
          {"segment_start", x.segment_start()}};
}

TokenizedText text_from_json(const json& j) {
  return TokenizedText(j.at("words").get<std::vector<std::string>>(),
                       j.at("attackable").get<std::vector<bool>>(), {},
                       j.at("space_before").get<std::vector<bool>>(),
                       j.at("segment_start").get<std::size_t>());
}

json config_to_json(const SearchConfig& c) {
  return {{"delta", c.delta},
          {"population_size", c.population_size},
          {"local_search_steps", c.local_search_steps},
          {"budget", c.budget},
          {"synonyms", c.synonyms},
          {"reward", c.reward},
          {"success_threshold", c.success_threshold},
          {"seed", c.seed},
          {"restart_initialization", c.restart_initialization},
          {"restore_mode", c.restore_mode == RestoreMode::kHalf ? "half" : "joint"},
          {"variant", to_string(c.variant)}};
}

json trace_entry_to_json(const TraceEntry& e) {
  json reps = json::array();
  for (const auto& r : e.replacements) reps.push_back({r.position, r.from, r.to});
  return {{"query", e.query},
          {"op", to_string(e.op)},
          {"positions", e.positions},
          {"replacements", std::move(reps)},
          {"adversarial", e.adversarial},
          {"accepted", e.accepted},
          {"fitness", e.fitness},
          {"weights_updated", e.weights_updated}};
}

namespace {

TraceEntry trace_entry_from_json(const json& j) {
  TraceEntry e;
  e.query = j.at("query").get<std::int64_t>();
  e.op = parse_trace_op(j.at("op").get<std::string>());
  e.positions = j.at("positions").get<std::vector<std::size_t>>();
  for (const auto& r : j.at("replacements")) {
    e.replacements.push_back(
        {r.at(0).get<std::size_t>(), r.at(1).get<std::size_t>(),
         r.at(2).get<std::size_t>()});
  }
  e.adversarial = j.at("adversarial").get<bool>();
  e.accepted = j.at("accepted").get<bool>();
  e.fitness = j.at("fitness").get<double>();
  e.weights_updated = j.at("weights_updated").get<bool>();
  return e;
}

}  // namespace

json record_to_json(const AttackRecord& r) {
  json trace = json::array();
  for (const auto& e : r.trace) trace.push_back(trace_entry_to_json(e));
  return {
      {"status", to_string(r.status)},
      {"original", text_to_json(r.original)},
      {"original_label", r.original_label.value},
      {"adversary", r.adversary ? text_to_json(*r.adversary) : json(nullptr)},
      {"adversary_text",
       r.adversary ? json(detokenize(*r.adversary)) : json(nullptr)},
      {"initial_adversary", r.initial_adversary
                                ? text_to_json(*r.initial_adversary)
                                : json(nullptr)},
      {"perturbation", r.perturbation},
      {"perturbed_words", r.perturbed_words},
      {"queries", r.queries},
      {"generations", r.generations},
      {"candidates", r.candidates.entries()},
      {"max_synonyms", r.candidates.max_synonyms()},
      {"weights", r.weights.rows()},
      {"trace", std::move(trace)},
  };
}

AttackRecord record_from_json(const json& j) {
  try {
    AttackRecord r;
    r.status = parse_status(j.at("status").get<std::string>());
    r.original = text_from_json(j.at("original"));
    r.original_label = Label{j.at("original_label").get<std::string>()};
    if (!j.at("adversary").is_null()) r.adversary = text_from_json(j["adversary"]);
    if (!j.at("initial_adversary").is_null()) {
      r.initial_adversary = text_from_json(j["initial_adversary"]);
    }
    r.perturbation = j.at("perturbation").get<double>();
    r.perturbed_words = j.at("perturbed_words").get<std::size_t>();
    r.queries = j.at("queries").get<std::int64_t>();
    r.generations = j.at("generations").get<std::size_t>();
    r.candidates = CandidateSet(
        j.at("candidates").get<std::vector<std::vector<std::string>>>(),
        j.at("max_synonyms").get<std::size_t>());
    r.weights = WeightTable(j.at("weights").get<std::vector<std::vector<double>>>());
    for (const auto& e : j.at("trace")) r.trace.push_back(trace_entry_from_json(e));
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed attack record: ") + e.what());
  } catch (const InvalidArgumentError& e) {
    throw ParseError(std::string("malformed attack record: ") + e.what());
  }
}

void write_trace(std::ostream& out, const std::vector<TraceEntry>& trace) {
  for (const auto& e : trace) out << trace_entry_to_json(e).dump() << '\n';
}

void export_weight_table(const AttackRecord& record,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_weight_export(out, record.weights, record.candidates);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace hardlabel
