#ifndef HARDLABEL_BATCH_H_
#define HARDLABEL_BATCH_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hardlabel/candidates.h"
#include "hardlabel/dataset.h"
#include "hardlabel/oracle.h"
#include "hardlabel/record_io.h"
#include "hardlabel/search.h"

namespace hardlabel {

// Creates one victim per worker. Called concurrently.
using VictimFactory = std::function<std::unique_ptr<Victim>()>;

struct BatchOptions {
  SearchConfig search;
  std::size_t workers = 1;
  // Independent passes over the dataset; pass r uses root seed
  // derive_seed(search.seed, r).
  std::size_t repeats = 1;
  AttackSegment segment = AttackSegment::kHypothesis;
  OracleHandle::Options oracle;
  const StopwordSet* stopwords = nullptr;  // default list when null
  // Keep weight snapshots, candidates and traces in the per-sample results.
  bool keep_full_records = false;
};

enum class SampleState { kAttacked, kSkipped, kError };

struct SampleResult {
  std::size_t index = 0;
  std::size_t repeat = 0;
  SampleState state = SampleState::kAttacked;
  std::string error;
  std::optional<AttackRecord> record;  // set when attacked
  double seconds = 0.0;
};

// Percentages follow the usual reporting convention (0..100).
struct Aggregate {
  std::size_t total = 0;
  std::size_t attacked = 0;  // originally correct and attacked
  std::size_t skipped = 0;   // misclassified before the attack
  std::size_t errors = 0;
  std::size_t successes = 0;
  // False when nothing was attacked; success_rate is then 0 by convention.
  bool success_rate_defined = false;
  double success_rate = 0.0;
  double mean_perturbation_success = 0.0;    // over successes
  double mean_perturbation_adversary = 0.0;  // over every attack that found one
  double mean_queries = 0.0;                 // over attacked samples
  double mean_seconds = 0.0;                 // wall clock per attack

  friend bool operator==(const Aggregate&, const Aggregate&) = default;
};

struct RunReport {
  std::string dataset;
  SearchConfig config;
  std::size_t repeats = 1;
  std::vector<SampleResult> samples;  // ordered by (repeat, index)
  std::vector<Aggregate> per_repeat;
  Aggregate pooled;
  double success_rate_stddev = 0.0;  // across repeats
};

Aggregate aggregate(const std::vector<SampleResult>& samples);

// Attacks every sample, skipping those the victim already misclassifies.
// A victim that fails on a probe query before the batch starts aborts the
// run (VictimFailureError); later per-sample failures are recorded and the
// batch continues. Results do not depend on `workers`.
RunReport run_batch(const Dataset& dataset, const CandidateProvider& candidates,
                    const VictimFactory& victims, const BatchOptions& options);

enum class SweepParameter { kDelta, kPopulationSize, kLocalSearchSteps, kBudget };

// "delta", "S", "N", "T". Throws InvalidArgumentError.
SweepParameter parse_sweep_parameter(std::string_view name);
std::string_view to_string(SweepParameter p);

struct SweepPoint {
  std::int64_t value = 0;
  RunReport report;
};

// run_batch once per value with the same base seed. Throws
// InvalidArgumentError on an empty value list.
std::vector<SweepPoint> sweep(const Dataset& dataset,
                              const CandidateProvider& candidates,
                              const VictimFactory& victims,
                              const BatchOptions& options,
                              SweepParameter parameter,
                              const std::vector<std::int64_t>& values);

// Human-readable aggregate table.
void write_summary(std::ostream& out, const RunReport& report);
void write_sweep_table(std::ostream& out, SweepParameter parameter,
                       const std::vector<SweepPoint>& points);

// Machine-readable outputs. Timing fields are omitted when
// `include_timing` is false so that reports can be compared byte for byte.
nlohmann::json report_to_json(const RunReport& report, bool include_timing);
void write_sample_records(std::ostream& out, const RunReport& report,
                          bool include_timing);

// records.jsonl, report.json and summary.txt under `dir` (created if
// missing). Throws IoError.
void write_report_files(const RunReport& report,
                        const std::filesystem::path& dir);

}  // namespace hardlabel

#endif  // HARDLABEL_BATCH_H_
