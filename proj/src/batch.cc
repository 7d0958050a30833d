#include "hardlabel/batch.h"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <thread>

#include "hardlabel/errors.h"

namespace hardlabel {
namespace {

using nlohmann::json;

std::string_view state_name(const SampleResult& s) {
  switch (s.state) {
    case SampleState::kSkipped:
      return "skipped";
    case SampleState::kError:
      return "error";
    case SampleState::kAttacked:
      return to_string(s.record->status);
  }
  return "unknown";
}

SampleResult attack_sample(const Sample& sample, std::size_t index,
                           std::size_t repeat, const CandidateProvider& provider,
                           Victim& victim, const BatchOptions& options) {
  SampleResult out;
  out.index = index;
  out.repeat = repeat;
  const auto started = std::chrono::steady_clock::now();
  try {
    const StopwordSet& stopwords =
        options.stopwords ? *options.stopwords : default_stopwords();
    TokenizedText x = to_text(sample, stopwords, options.segment);
    OracleHandle handle(victim, options.search.budget, options.oracle);
    Label original = handle.classify_original(x);
    if (original != sample.label) {
      out.state = SampleState::kSkipped;
    } else {
      CandidateSet candidates = provider.build(x);
      Rng rng(derive_seed(derive_seed(options.search.seed, repeat), index));
      AttackRecord record =
          run_attack(x, candidates, handle, original, options.search, rng);
      if (!options.keep_full_records) {
        record.trace.clear();
        record.trace.shrink_to_fit();
        record.weights = WeightTable();
        record.candidates = CandidateSet();
      }
      out.record = std::move(record);
    }
  } catch (const Error& e) {
    out.state = SampleState::kError;
    out.error = e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              started)
                    .count();
  return out;
}

json aggregate_to_json(const Aggregate& a, bool include_timing) {
  json j = {{"total", a.total},
            {"attacked", a.attacked},
            {"skipped", a.skipped},
            {"errors", a.errors},
            {"successes", a.successes},
            {"success_rate_defined", a.success_rate_defined},
            {"success_rate", a.success_rate},
            {"mean_perturbation_success", a.mean_perturbation_success},
            {"mean_perturbation_adversary", a.mean_perturbation_adversary},
            {"mean_queries", a.mean_queries}};
  if (include_timing) j["mean_seconds"] = a.mean_seconds;
  return j;
}

json sample_to_json(const SampleResult& s, bool include_timing) {
  json j = {{"index", s.index}, {"repeat", s.repeat}, {"status", state_name(s)}};
  if (s.state == SampleState::kError) j["error"] = s.error;
  if (s.record) {
    const auto& r = *s.record;
    j["queries"] = r.queries;
    j["generations"] = r.generations;
    j["perturbation"] = r.perturbation;
    j["perturbed_words"] = r.perturbed_words;
    j["original"] = detokenize(r.original);
    j["adversary"] = r.adversary ? json(detokenize(*r.adversary)) : json(nullptr);
    if (!r.weights.rows().empty()) j["record"] = record_to_json(r);
  }
  if (include_timing) j["seconds"] = s.seconds;
  return j;
}

void fmt_row(std::ostream& out, const std::string& label, const Aggregate& a) {
  out << std::left << std::setw(10) << label << std::right << std::fixed
      << std::setprecision(1) << std::setw(9) << a.success_rate << std::setw(9)
      << a.mean_perturbation_success << std::setw(11) << a.mean_queries
      << std::setw(10) << std::setprecision(3) << a.mean_seconds
      << std::setw(10) << a.attacked << std::setw(9) << a.skipped
      << std::setw(8) << a.errors
      << (a.success_rate_defined ? "" : "   (no attacked samples)") << '\n';
}

}  // namespace

Aggregate aggregate(const std::vector<SampleResult>& samples) {
  Aggregate a;
  double pert_success = 0.0;
  double pert_adversary = 0.0;
  std::size_t with_adversary = 0;
  double queries = 0.0;
  double seconds = 0.0;
  for (const auto& s : samples) {
    ++a.total;
    if (s.state == SampleState::kSkipped) {
      ++a.skipped;
      continue;
    }
    if (s.state == SampleState::kError) {
      ++a.errors;
      continue;
    }
    const AttackRecord& r = *s.record;
    ++a.attacked;
    queries += static_cast<double>(r.queries);
    seconds += s.seconds;
    if (r.adversary) {
      ++with_adversary;
      pert_adversary += r.perturbation;
    }
    if (r.status == AttackStatus::kSuccess) {
      ++a.successes;
      pert_success += r.perturbation;
    }
  }
  a.success_rate_defined = a.attacked > 0;
  if (a.attacked > 0) {
    const double n = static_cast<double>(a.attacked);
    a.success_rate = 100.0 * static_cast<double>(a.successes) / n;
    a.mean_queries = queries / n;
    a.mean_seconds = seconds / n;
  }
  if (a.successes > 0) {
    a.mean_perturbation_success =
        100.0 * pert_success / static_cast<double>(a.successes);
  }
  if (with_adversary > 0) {
    a.mean_perturbation_adversary =
        100.0 * pert_adversary / static_cast<double>(with_adversary);
  }
  return a;
}

RunReport run_batch(const Dataset& dataset, const CandidateProvider& candidates,
                    const VictimFactory& victims, const BatchOptions& options) {
  options.search.validate();
  if (options.repeats < 1) throw InvalidArgumentError("repeats must be >= 1");
  if (dataset.samples.empty()) throw EmptyInputError("dataset is empty");

  {
    // Reachability probe; failures here abort the whole batch.
    auto probe = victims();
    const StopwordSet& stopwords =
        options.stopwords ? *options.stopwords : default_stopwords();
    TokenizedText x = to_text(dataset.samples.front(), stopwords, options.segment);
    try {
      probe->classify(x);
    } catch (const VictimFailureError& e) {
      throw VictimFailureError(std::string("victim unreachable: ") + e.what());
    }
  }

  const std::size_t n = dataset.samples.size();
  const std::size_t tasks = n * options.repeats;
  std::vector<SampleResult> results(tasks);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr fatal;

  auto worker = [&] {
    try {
      auto victim = victims();
      for (std::size_t t = next++; t < tasks; t = next++) {
        std::size_t repeat = t / n;
        std::size_t index = t % n;
        results[t] = attack_sample(dataset.samples[index], index, repeat,
                                   candidates, *victim, options);
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!fatal) fatal = std::current_exception();
      next = tasks;
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, options.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, tasks); ++w) {
      pool.emplace_back(worker);
    }
    for (auto& th : pool) th.join();
  }
  if (fatal) std::rethrow_exception(fatal);

  RunReport report;
  report.dataset = dataset.name;
  report.config = options.search;
  report.repeats = options.repeats;
  report.samples = std::move(results);
  report.pooled = aggregate(report.samples);
  for (std::size_t r = 0; r < options.repeats; ++r) {
    std::vector<SampleResult> slice(
        report.samples.begin() + static_cast<long>(r * n),
        report.samples.begin() + static_cast<long>((r + 1) * n));
    report.per_repeat.push_back(aggregate(slice));
  }
  if (options.repeats > 1) {
    double mean = 0.0;
    for (const auto& a : report.per_repeat) mean += a.success_rate;
    mean /= static_cast<double>(options.repeats);
    double ss = 0.0;
    for (const auto& a : report.per_repeat) {
      ss += (a.success_rate - mean) * (a.success_rate - mean);
    }
    report.success_rate_stddev =
        std::sqrt(ss / static_cast<double>(options.repeats - 1));
  }
  return report;
}

SweepParameter parse_sweep_parameter(std::string_view name) {
  if (name == "delta") return SweepParameter::kDelta;
  if (name == "S") return SweepParameter::kPopulationSize;
  if (name == "N") return SweepParameter::kLocalSearchSteps;
  if (name == "T") return SweepParameter::kBudget;
  throw InvalidArgumentError("unknown sweep parameter '" + std::string(name) +
                             "' (expected delta, S, N or T)");
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::kDelta:
      return "delta";
    case SweepParameter::kPopulationSize:
      return "S";
    case SweepParameter::kLocalSearchSteps:
      return "N";
    case SweepParameter::kBudget:
      return "T";
  }
  return "unknown";
}

std::vector<SweepPoint> sweep(const Dataset& dataset,
                              const CandidateProvider& candidates,
                              const VictimFactory& victims,
                              const BatchOptions& options,
                              SweepParameter parameter,
                              const std::vector<std::int64_t>& values) {
  if (values.empty()) throw InvalidArgumentError("sweep needs at least one value");
  for (auto v : values) {
    if (v < 0) throw InvalidArgumentError("sweep values must be non-negative");
  }
  std::vector<SweepPoint> out;
  for (std::int64_t v : values) {
    BatchOptions opts = options;
    auto u = static_cast<std::size_t>(v);
    switch (parameter) {
      case SweepParameter::kDelta:
        opts.search.delta = u;
        break;
      case SweepParameter::kPopulationSize:
        opts.search.population_size = u;
        break;
      case SweepParameter::kLocalSearchSteps:
        opts.search.local_search_steps = u;
        break;
      case SweepParameter::kBudget:
        opts.search.budget = v;
        break;
    }
    out.push_back(SweepPoint{v, run_batch(dataset, candidates, victims, opts)});
  }
  return out;
}

void write_summary(std::ostream& out, const RunReport& report) {
  out << "dataset: " << report.dataset << "  variant: "
      << to_string(report.config.variant) << "  T=" << report.config.budget
      << "  seed=" << report.config.seed << '\n';
  out << "run       Succ.(%)  Pert.(%)    Queries  Time(s)  Attacked  Skipped  Errors\n";
  if (report.repeats > 1) {
    for (std::size_t r = 0; r < report.per_repeat.size(); ++r) {
      fmt_row(out, "#" + std::to_string(r), report.per_repeat[r]);
    }
  }
  fmt_row(out, "all", report.pooled);
  if (report.repeats > 1) {
    out << "success rate std over " << report.repeats
        << " runs: " << std::fixed << std::setprecision(2)
        << report.success_rate_stddev << '\n';
  }
}

void write_sweep_table(std::ostream& out, SweepParameter parameter,
                       const std::vector<SweepPoint>& points) {
  out << std::left << std::setw(8) << to_string(parameter) << std::right
      << "  Succ.(%)  Pert.(%)    Queries\n";
  for (const auto& p : points) {
    const auto& a = p.report.pooled;
    out << std::left << std::setw(8) << p.value << std::right << std::fixed
        << std::setprecision(1) << std::setw(10) << a.success_rate
        << std::setw(10) << a.mean_perturbation_success << std::setw(11)
        << a.mean_queries << '\n';
  }
}

json report_to_json(const RunReport& report, bool include_timing) {
  json per_repeat = json::array();
  for (const auto& a : report.per_repeat) {
    per_repeat.push_back(aggregate_to_json(a, include_timing));
  }
  return {{"dataset", report.dataset},
          {"config", config_to_json(report.config)},
          {"repeats", report.repeats},
          {"pooled", aggregate_to_json(report.pooled, include_timing)},
          {"per_repeat", std::move(per_repeat)},
          {"success_rate_stddev", report.success_rate_stddev}};
}

void write_sample_records(std::ostream& out, const RunReport& report,
                          bool include_timing) {
  for (const auto& s : report.samples) {
    out << sample_to_json(s, include_timing).dump() << '\n';
  }
}

void write_report_files(const RunReport& report,
                        const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  auto open = [&](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw IoError("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("records.jsonl");
    write_sample_records(f, report, true);
  }
  {
    auto f = open("report.json");
    f << report_to_json(report, true).dump(2) << '\n';
  }
  {
    auto f = open("summary.txt");
    write_summary(f, report);
  }
}

}  // namespace hardlabel
