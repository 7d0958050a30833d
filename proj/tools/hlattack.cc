// Command-line front end: attack one text, attack a dataset, sweep one
// parameter, or export the weight table of a saved attack record.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include "hardlabel/batch.h"
#include "hardlabel/candidates.h"
#include "hardlabel/dataset.h"
#include "hardlabel/errors.h"
#include "hardlabel/oracle.h"
#include "hardlabel/record_io.h"
#include "hardlabel/remote_victim.h"
#include "hardlabel/search.h"

namespace hl = hardlabel;

namespace {

struct SearchFlags {
  hl::SearchConfig config;
  std::string variant = "full";
  std::string restore = "half";
};

struct VictimFlags {
  std::string linear_weights;
  hl::RemoteVictimConfig remote;
  std::int64_t timeout_ms = 10000;
  std::int64_t backoff_ms = 200;
  std::int64_t min_interval_ms = 0;
  bool charge_original = false;
  bool no_cache = false;
};

struct CandidateFlags {
  std::string embeddings;
  std::string synonym_table;
  std::string stopwords;
};

struct DatasetFlags {
  std::string path;
  std::string format;
  std::string segment = "hypothesis";
  std::size_t workers = 1;
  std::size_t repeats = 1;
  std::string output_dir;
  bool keep_records = false;
};

void add_search_flags(CLI::App* app, SearchFlags& f) {
  auto& c = f.config;
  app->add_option("--delta", c.delta, "Max positions changed per local-search step")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("-S,--population-size", c.population_size, "Population size")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("-N,--local-search-steps", c.local_search_steps,
                  "Local-search steps per member per generation")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("-T,--budget", c.budget, "Query budget")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  app->add_option("-m,--synonyms", c.synonyms, "Synonyms per word")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("-r,--reward", c.reward, "Weight-table reward")->capture_default_str();
  app->add_option("--success-threshold", c.success_threshold,
                  "Largest perturbation rate counted as success")
      ->capture_default_str();
  app->add_option("--seed", c.seed, "Root random seed")->capture_default_str();
  app->add_flag("--restart-init", c.restart_initialization,
                "Draw each initialization attempt from the original text");
  app->add_option("--restore-mode", f.restore, "half or joint")
      ->capture_default_str()->check(CLI::IsMember({"half", "joint"}));
  app->add_option("--variant", f.variant, "Search variant")
      ->capture_default_str()
      ->check(CLI::IsMember({"full", "weight_table_only", "hybrid_unweighted",
                             "mutation_for_localsearch", "crossover_for_recombination",
                             "random_search", "random_flip"}));
}

void add_victim_flags(CLI::App* app, VictimFlags& f) {
  auto* group = app->add_option_group("victim", "Exactly one victim source");
  group->add_option("--victim-weights", f.linear_weights,
                    "Linear bag-of-words victim (word<TAB>weight lines)")
      ->check(CLI::ExistingFile);
  group->add_option("--remote-endpoint", f.remote.endpoint, "http:// classification URL");
  group->require_option(1);
  app->add_option("--request-template", f.remote.request_template,
                  "JSON body with {text}, {premise}, {hypothesis} placeholders")
      ->capture_default_str();
  app->add_option("--label-path", f.remote.label_path,
                  "Dot-separated path to the label in the response")
      ->capture_default_str();
  app->add_option("--timeout-ms", f.timeout_ms, "Per-request timeout")->capture_default_str();
  app->add_option("--max-attempts", f.remote.max_attempts, "Attempts per text")
      ->capture_default_str();
  app->add_option("--backoff-ms", f.backoff_ms, "First retry delay, doubled per retry")
      ->capture_default_str();
  app->add_option("--min-interval-ms", f.min_interval_ms, "Minimum spacing of requests")
      ->capture_default_str();
  app->add_option("--header", f.remote.header, "Extra request header, \"Name: value\"");
  app->add_flag("--charge-original", f.charge_original,
                "Count the query for the original label against the budget");
  app->add_flag("--no-cache", f.no_cache, "Send repeated texts to the victim again");
}

void add_candidate_flags(CLI::App* app, CandidateFlags& f) {
  auto* group = app->add_option_group("candidates", "Exactly one synonym source");
  group->add_option("--embeddings", f.embeddings, "Word vectors, one \"word v1 v2 ...\" per line")
      ->check(CLI::ExistingFile);
  group->add_option("--synonym-table", f.synonym_table, "word<TAB>syn1,syn2 lines")
      ->check(CLI::ExistingFile);
  group->require_option(1);
  app->add_option("--stopwords", f.stopwords, "Stopword list replacing the built-in one")
      ->check(CLI::ExistingFile);
}

void add_dataset_flags(CLI::App* app, DatasetFlags& f) {
  app->add_option("--dataset", f.path, "TSV or JSONL dataset")
      ->required()->check(CLI::ExistingFile);
  app->add_option("--format", f.format, "tsv or jsonl (default: from extension)")
      ->check(CLI::IsMember({"tsv", "jsonl"}));
  app->add_option("--segment", f.segment, "Sentence-pair segment to attack")
      ->capture_default_str()->check(CLI::IsMember({"hypothesis", "premise", "both"}));
  app->add_option("--workers", f.workers, "Worker threads")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--repeats", f.repeats, "Passes over the dataset with derived seeds")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("-o,--output-dir", f.output_dir, "Directory for report files");
  app->add_flag("--keep-records", f.keep_records,
                "Include weight tables and candidate sets in records.jsonl");
}

hl::SearchConfig finish_search(const SearchFlags& f) {
  hl::SearchConfig c = f.config;
  c.variant = hl::parse_variant(f.variant);
  c.restore_mode = f.restore == "joint" ? hl::RestoreMode::kJoint : hl::RestoreMode::kHalf;
  c.validate();
  return c;
}

hl::AttackSegment parse_segment(const std::string& s) {
  if (s == "premise") return hl::AttackSegment::kPremise;
  if (s == "both") return hl::AttackSegment::kBoth;
  return hl::AttackSegment::kHypothesis;
}

hl::OracleHandle::Options oracle_options(const VictimFlags& f) {
  return {.charge_original_query = f.charge_original, .cache = !f.no_cache};
}

hl::VictimFactory make_victims(VictimFlags& f) {
  if (!f.linear_weights.empty()) {
    auto victim = std::make_shared<hl::LinearBagVictim>(hl::load_linear_victim(f.linear_weights));
    return [victim] { return std::make_unique<hl::LinearBagVictim>(*victim); };
  }
  f.remote.timeout = std::chrono::milliseconds(f.timeout_ms);
  f.remote.backoff = std::chrono::milliseconds(f.backoff_ms);
  f.remote.min_interval = std::chrono::milliseconds(f.min_interval_ms);
  hl::validate(f.remote);
  auto config = f.remote;
  return [config] { return std::make_unique<hl::RemoteVictim>(config); };
}

// Owns whichever candidate source was selected.
struct Candidates {
  std::optional<hl::EmbeddingIndex> index;
  std::unique_ptr<hl::CandidateProvider> provider;
};

Candidates make_candidates(const CandidateFlags& f, std::size_t m) {
  Candidates c;
  if (!f.embeddings.empty()) {
    c.index = hl::load_embeddings(f.embeddings);
    c.provider = std::make_unique<hl::EmbeddingCandidates>(*c.index, m);
  } else {
    c.provider = std::make_unique<hl::SynonymTable>(hl::load_synonym_table(f.synonym_table, m));
  }
  return c;
}

hl::StopwordSet make_stopwords(const CandidateFlags& f) {
  return f.stopwords.empty() ? hl::default_stopwords() : hl::load_stopwords(f.stopwords);
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw hl::IoError("cannot write " + path);
  out << j.dump(2) << "\n";
}

int run_attack_command(SearchFlags& sf, VictimFlags& vf, CandidateFlags& cf,
                       const std::string& text, const std::string& premise,
                       const std::string& hypothesis, const std::string& segment,
                       const std::string& output, const std::string& weights_out,
                       const std::string& trace_out) {
  auto config = finish_search(sf);
  if (!trace_out.empty()) config.record_trace = true;
  const auto stopwords = make_stopwords(cf);
  auto x = text.empty() ? hl::tokenize_pair(premise, hypothesis, stopwords, parse_segment(segment))
                        : hl::tokenize(text, stopwords);
  auto candidates = make_candidates(cf, config.synonyms);
  auto cands = candidates.provider->build(x);
  auto victim = make_victims(vf)();
  hl::OracleHandle handle(*victim, config.budget, oracle_options(vf));
  const hl::Label label = handle.classify_original(x);
  hl::Rng rng(config.seed);
  auto rec = hl::run_attack(x, cands, handle, label, config, rng);

  std::cout << "status:       " << hl::to_string(rec.status) << "\n"
            << "label:        " << label.value << "\n"
            << "original:     " << hl::detokenize(x) << "\n"
            << "adversary:    " << (rec.adversary ? hl::detokenize(*rec.adversary) : "-") << "\n"
            << "perturbation: " << 100.0 * rec.perturbation << "% (" << rec.perturbed_words
            << " words)\n"
            << "queries:      " << rec.queries << "\n";
  if (!output.empty()) write_json_file(output, hl::record_to_json(rec));
  if (!weights_out.empty()) hl::export_weight_table(rec, weights_out);
  if (!trace_out.empty()) {
    std::ofstream out(trace_out);
    if (!out) throw hl::IoError("cannot write " + trace_out);
    hl::write_trace(out, rec.trace);
  }
  return rec.status == hl::AttackStatus::kSuccess ? 0 : 2;
}

hl::BatchOptions batch_options(const SearchFlags& sf, const VictimFlags& vf,
                               const DatasetFlags& df, const hl::StopwordSet& stopwords) {
  hl::BatchOptions o;
  o.search = finish_search(sf);
  o.workers = df.workers;
  o.repeats = df.repeats;
  o.segment = parse_segment(df.segment);
  o.oracle = oracle_options(vf);
  o.stopwords = &stopwords;
  o.keep_full_records = df.keep_records;
  return o;
}

hl::Dataset load(const DatasetFlags& df) {
  auto format = df.format.empty() ? hl::guess_dataset_format(df.path)
                                  : hl::parse_dataset_format(df.format);
  return hl::load_dataset(df.path, format);
}

int run_batch_command(SearchFlags& sf, VictimFlags& vf, CandidateFlags& cf, DatasetFlags& df) {
  const auto stopwords = make_stopwords(cf);
  auto options = batch_options(sf, vf, df, stopwords);
  auto dataset = load(df);
  auto candidates = make_candidates(cf, options.search.synonyms);
  auto report = hl::run_batch(dataset, *candidates.provider, make_victims(vf), options);
  hl::write_summary(std::cout, report);
  if (!df.output_dir.empty()) hl::write_report_files(report, df.output_dir);
  return 0;
}

int run_sweep_command(SearchFlags& sf, VictimFlags& vf, CandidateFlags& cf, DatasetFlags& df,
                      const std::string& parameter, const std::vector<std::int64_t>& values) {
  const auto stopwords = make_stopwords(cf);
  auto options = batch_options(sf, vf, df, stopwords);
  auto dataset = load(df);
  auto candidates = make_candidates(cf, options.search.synonyms);
  const auto param = hl::parse_sweep_parameter(parameter);
  auto points = hl::sweep(dataset, *candidates.provider, make_victims(vf), options, param, values);
  hl::write_sweep_table(std::cout, param, points);
  if (!df.output_dir.empty()) {
    for (const auto& p : points) {
      hl::write_report_files(p.report, std::filesystem::path(df.output_dir) /
                                           (std::string(hl::to_string(param)) + "=" +
                                            std::to_string(p.value)));
    }
  }
  return 0;
}

int run_export_command(const std::string& record_path, const std::string& output) {
  std::ifstream in(record_path);
  if (!in) throw hl::IoError("cannot read " + record_path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw hl::ParseError(e.what());
  }
  // Accept a bare attack record or a records.jsonl entry that embeds one.
  if (j.contains("record")) j = j["record"];
  auto rec = hl::record_from_json(j);
  if (output.empty()) {
    hl::write_weight_export(std::cout, rec.weights, rec.candidates);
  } else {
    hl::export_weight_table(rec, output);
  }
  return 0;
}

// The config file is read by the top-level app, so "--config FILE" given
// after the subcommand is moved in front of it.
std::vector<std::string> hoist_config(int argc, char** argv) {
  std::vector<std::string> rest, config;
  for (int k = 1; k < argc; ++k) {
    std::string a = argv[k];
    if (a == "--config" && k + 1 < argc) {
      config = {a, argv[++k]};
    } else if (a.rfind("--config=", 0) == 0) {
      config = {a};
    } else {
      rest.push_back(a);
    }
  }
  config.insert(config.end(), rest.begin(), rest.end());
  // CLI11 expects the arguments in reverse order.
  std::reverse(config.begin(), config.end());
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hard-label word-substitution attacks guided by a learned weight table"};
  app.set_config("--config", "",
                 "TOML file with option values in a [subcommand] table; flags win");
  app.require_subcommand(1);

  SearchFlags sf;
  VictimFlags vf;
  CandidateFlags cf;
  DatasetFlags df;

  auto* attack = app.add_subcommand("attack", "Attack a single text");
  std::string text, premise, hypothesis, segment = "hypothesis", output, weights_out, trace_out;
  auto* text_opt = attack->add_option("--text", text, "Text to attack");
  auto* premise_opt = attack->add_option("--premise", premise, "Premise of a sentence pair");
  auto* hypothesis_opt =
      attack->add_option("--hypothesis", hypothesis, "Hypothesis of a sentence pair");
  text_opt->excludes(premise_opt)->excludes(hypothesis_opt);
  premise_opt->needs(hypothesis_opt);
  hypothesis_opt->needs(premise_opt);
  attack->add_option("--segment", segment, "Sentence-pair segment to attack")
      ->capture_default_str()->check(CLI::IsMember({"hypothesis", "premise", "both"}));
  attack->add_option("-o,--output", output, "Write the attack record as JSON");
  attack->add_option("--weights-out", weights_out, "Write the weight-table export");
  attack->add_option("--trace-out", trace_out, "Write the per-query trace as JSONL");
  add_search_flags(attack, sf);
  add_victim_flags(attack, vf);
  add_candidate_flags(attack, cf);

  auto* batch = app.add_subcommand("batch", "Attack every sample of a dataset");
  add_search_flags(batch, sf);
  add_victim_flags(batch, vf);
  add_candidate_flags(batch, cf);
  add_dataset_flags(batch, df);

  auto* sweep = app.add_subcommand("sweep", "Repeat a batch over values of one parameter");
  std::string parameter;
  std::vector<std::int64_t> values;
  sweep->add_option("--param", parameter, "delta, S, N or T")
      ->required()->check(CLI::IsMember({"delta", "S", "N", "T"}));
  sweep->add_option("--values", values, "Values to try")->required()->delimiter(',');
  add_search_flags(sweep, sf);
  add_victim_flags(sweep, vf);
  add_candidate_flags(sweep, cf);
  add_dataset_flags(sweep, df);

  auto* export_weights =
      app.add_subcommand("export-weights", "Export the weight table of a saved attack record");
  std::string record_path, export_out;
  export_weights->add_option("record", record_path, "Attack record JSON")
      ->required()->check(CLI::ExistingFile);
  export_weights->add_option("-o,--output", export_out, "Output file (default: stdout)");

  try {
    app.parse(hoist_config(argc, argv));
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*attack) {
      if (text.empty() && premise.empty()) {
        std::cerr << "attack: give --text or --premise/--hypothesis\n";
        return 1;
      }
      return run_attack_command(sf, vf, cf, text, premise, hypothesis, segment, output,
                                weights_out, trace_out);
    }
    if (*batch) return run_batch_command(sf, vf, cf, df);
    if (*sweep) return run_sweep_command(sf, vf, cf, df, parameter, values);
    if (*export_weights) return run_export_command(record_path, export_out);
  } catch (const hl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
