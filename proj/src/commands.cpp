#include "qsv/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "json.hpp"
#include "qsv/dpso.hpp"
#include "qsv/io.hpp"
#include "qsv/sop.hpp"
#include "qsv/stabilizer.hpp"

namespace qsv {

namespace {

using nlohmann::json;

// --- generic plumbing -------------------------------------------------------

int thread_count(const ExperimentConfig& config) {
  if (config.threads > 0) return config.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 4 : static_cast<int>(hw);
}

// Evaluate fn(0..count-1) across workers into an index-ordered vector, so the
// merged result is independent of the worker count and completion order.
template <typename T, typename Fn>
std::vector<T> run_indexed(long long count, int threads, Fn&& fn) {
  std::vector<T> results(static_cast<std::size_t>(count));
  if (threads <= 1 || count < 32) {
    for (long long i = 0; i < count; ++i) results[static_cast<std::size_t>(i)] = fn(i);
    return results;
  }
  constexpr long long kChunk = 32;
  std::atomic<long long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    try {
      while (true) {
        const long long start = next.fetch_add(kChunk);
        if (start >= count) break;
        const long long stop = std::min(count, start + kChunk);
        for (long long i = start; i < stop; ++i) results[static_cast<std::size_t>(i)] = fn(i);
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  const int workers = std::min<long long>(threads, (count + kChunk - 1) / kChunk);
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

std::string format_double(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

std::string join_ints(const std::vector<int>& values, char sep) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s.push_back(sep);
    s += std::to_string(values[i]);
  }
  return s;
}

std::string bits_string(const std::vector<int>& bits) {
  std::string s;
  for (int b : bits) s.push_back(b ? '1' : '0');
  return s;
}

std::string axes_string(const std::vector<Axis>& axes) {
  std::string s;
  for (Axis a : axes) s.push_back(axis_letter(a));
  return s;
}

// Emit a table as CSV (header + rows + "# key=value" block) or as JSON
// ({"rows": [...], "meta": {...}}).
void emit_table(const ExperimentConfig& config, std::ostream& out,
                const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows,
                const std::vector<std::pair<std::string, std::string>>& metadata) {
  if (config.format == "csv") {
    std::vector<std::string> lines;
    lines.reserve(metadata.size());
    for (const auto& [key, value] : metadata) lines.push_back(key + "=" + value);
    write_csv(out, header, rows, lines);
    return;
  }
  json doc;
  doc["rows"] = json::array();
  for (const auto& row : rows) {
    json entry;
    for (std::size_t i = 0; i < header.size(); ++i) entry[header[i]] = row[i];
    doc["rows"].push_back(std::move(entry));
  }
  json meta;
  for (const auto& [key, value] : metadata) meta[key] = value;
  meta["version"] = kVersion;
  doc["meta"] = std::move(meta);
  out << doc.dump(2) << '\n';
}

// --- experiment pieces ------------------------------------------------------

Target resolve_target(const ExperimentConfig& config) {
  if (config.target == "ghz") return Target(ghz(config.n).stabilizer);
  if (config.target == "haar") return Target(haar_random(config.n, config.seed));
  if (config.target == "random-stabilizer") {
    return Target(random_stabilizer(config.n, config.seed));
  }
  if (config.target.find('.') != std::string::npos ||
      config.target.find('/') != std::string::npos) {
    return load_target_json(config.target);
  }
  throw validation_error("unknown target \"" + config.target +
                         "\" (expected ghz, haar, random-stabilizer, or a JSON path)");
}

SamplingPlan resolve_plan(const Target& target, const ExperimentConfig& config) {
  const int n = target_qubits(target);
  if (config.scheme == "naive") return SamplingPlan::naive_uniform(n, config.level);
  if (config.scheme == "classes") return SamplingPlan::ghz_class_uniform(n, config.level);
  if (config.scheme == "lp") {
    return optimize_plan(target, config.level, PlanMethod::stabilizer_lp, config.seed).plan;
  }
  if (config.scheme == "grid") {
    return optimize_plan(target, config.level, PlanMethod::grid, config.seed).plan;
  }
  if (config.scheme == "ascent") {
    return optimize_plan(target, config.level, PlanMethod::projected_ascent, config.seed).plan;
  }
  throw validation_error("unknown scheme \"" + config.scheme +
                         "\" (expected naive, classes, lp, grid, or ascent)");
}

// The strategy operator the configuration names.  The plm protocol runs the
// same strategy as dpso sequentially, so both share the dpso operator.
StrategyOperator resolve_strategy(const Target& target, const ExperimentConfig& config) {
  if (config.protocol == "sop") return build_L(target, config.level);
  if (config.protocol == "dpso" || config.protocol == "plm") {
    return build_strategy_operator(target, resolve_plan(target, config));
  }
  throw validation_error("unknown protocol \"" + config.protocol +
                         "\" (expected plm, sop, or dpso)");
}

DeviceSource resolve_device(const ExperimentConfig& config, const PureState& psi,
                            const StrategyOperator& omega) {
  if (config.device == "exact") return DeviceSource::exact(psi);
  if (config.device.rfind("worst:", 0) == 0) {
    return DeviceSource::worst_case(psi, std::stod(config.device.substr(6)), omega);
  }
  if (config.device.rfind("depol:", 0) == 0) {
    return DeviceSource::depolarized(psi, std::stod(config.device.substr(6)));
  }
  if (config.device.find('.') != std::string::npos ||
      config.device.find('/') != std::string::npos) {
    return DeviceSource::fixed(load_density_json(config.device), config.device);
  }
  throw validation_error("unknown device \"" + config.device +
                         "\" (expected exact, worst:<eps>, depol:<p>, or a JSON path)");
}

long long resolve_trials(const ExperimentConfig& config, double nu) {
  if (config.trials != "auto") {
    std::size_t used = 0;
    const long long parsed = std::stoll(config.trials, &used);
    if (used != config.trials.size() || parsed < 1) {
      throw validation_error("trials must be \"auto\" or a positive integer");
    }
    return parsed;
  }
  TestConfig cfg(config.epsilon, config.delta, nu, 0.0, 1.0);
  if (config.protocol == "plm") {
    return plm_sample_complexity(config.epsilon, config.delta, nu);
  }
  if (config.protocol == "sop") return sop_sample_complexity(config.level, cfg);
  return dpso_sample_complexity(config.level, cfg);
}

std::uint64_t sample_seed(std::uint64_t seed, long long index) {
  return splitmix64(seed ^ splitmix64(0x73616d706c65ULL + static_cast<std::uint64_t>(index)));
}

// Spectral gap of one protocol configuration against one target.
double gap_of(const Target& target, const ExperimentConfig& config) {
  return resolve_strategy(target, config).gap;
}

// --- commands ---------------------------------------------------------------

int cmd_gap(const ExperimentConfig& config, std::ostream& out) {
  const Target target = resolve_target(config);
  const double nu = gap_of(target, config);
  emit_table(config, out, {"target", "n", "protocol", "level", "scheme", "nu"},
             {{config.target, std::to_string(target_qubits(target)), config.protocol,
               std::to_string(config.level), config.scheme, format_double(nu)}},
             {{"seed", std::to_string(config.seed)}});
  return 0;
}

int cmd_verify(const ExperimentConfig& config, std::ostream& out) {
  const Target target = resolve_target(config);
  const PureState psi = target_to_dense(target);
  const StrategyOperator omega = resolve_strategy(target, config);
  if (omega.gap <= 0.0) {
    throw zero_gap_error("verify: the strategy operator is gapless for this configuration");
  }
  const DeviceSource device = resolve_device(config, psi, omega);
  const DensityOperator& rho = device.emit();
  const long long trials = resolve_trials(config, omega.gap);
  const double chi = config.chi > 0.0 ? config.chi : config.delta;

  json verdict;
  verdict["target"] = config.target;
  verdict["n"] = target_qubits(target);
  verdict["protocol"] = config.protocol;
  verdict["level"] = config.level;
  verdict["scheme"] = config.protocol == "sop" ? "z-only" : config.scheme;
  verdict["device"] = config.device;
  verdict["nu"] = omega.gap;
  verdict["epsilon"] = config.epsilon;
  verdict["delta"] = config.delta;
  verdict["chi"] = chi;
  verdict["seed"] = config.seed;
  verdict["trials"] = trials;

  std::vector<std::vector<std::string>> log;
  bool accepted = false;

  if (config.protocol == "plm") {
    std::vector<BinaryTest> tests;
    const SamplingPlan plan = resolve_plan(target, config);
    for (std::size_t k = 0; k < plan.subsets.size(); ++k) {
      for (std::size_t l = 0; l < plan.axis_strings.size(); ++l) {
        const double p = plan.subset_probs[k] * plan.axis_probs[l];
        if (p <= 0.0) continue;
        std::vector<Axis> axes;
        for (char c : plan.axis_strings[l]) axes.push_back(axis_from_letter(c));
        tests.emplace_back(build_test_operator(target, plan.subsets[k], axes).matrix, p);
      }
    }
    RngStream rng(config.seed, {0x706c6dULL});
    const PlmVerdict result = plm_run(rho, trials, tests, rng);
    accepted = result.accepted;
    verdict["tests_run"] = result.tests_run;
    verdict["accepted"] = accepted;
    log.push_back({config.protocol, std::to_string(trials),
                   std::to_string(result.tests_run), accepted ? "1" : "0"});
    if (config.format == "csv") {
      emit_table(config, out, {"protocol", "trials", "tests_run", "accepted"}, log,
                 {{"seed", std::to_string(config.seed)}, {"nu", format_double(omega.gap)}});
    } else {
      out << verdict.dump(2) << '\n';
    }
    return accepted ? 0 : 1;
  }

  // Mean-threshold protocols: per-trial records merged by index.
  double b = 0.0;
  if (config.protocol == "sop") {
    b = std::ldexp(1.0, 2 * config.level - 1);
    const auto trials_log = run_indexed<SopTrial>(
        trials, thread_count(config), [&](long long i) {
          RngStream rng = RngStream::for_trial(config.seed, static_cast<std::uint64_t>(i));
          return sop_trial(rho, target, config.level, rng);
        });
    double sum = 0.0;
    for (long long i = 0; i < trials; ++i) {
      const SopTrial& t = trials_log[static_cast<std::size_t>(i)];
      sum += t.overlap;
      log.push_back({std::to_string(i), join_ints(t.subset, '|'), "Z", bits_string(t.z_bits),
                     axes_string(t.shadow.axes), bits_string(t.shadow.outcomes),
                     format_double(t.overlap)});
    }
    verdict["mean"] = sum / static_cast<double>(trials);
  } else {
    const SamplingPlan plan = resolve_plan(target, config);
    b = std::ldexp(1.0, config.level);
    const auto trials_log = run_indexed<DpsoTrial>(
        trials, thread_count(config), [&](long long i) {
          RngStream rng = RngStream::for_trial(config.seed, static_cast<std::uint64_t>(i));
          return dpso_trial(rho, target, plan, rng);
        });
    double sum = 0.0;
    for (long long i = 0; i < trials; ++i) {
      const DpsoTrial& t = trials_log[static_cast<std::size_t>(i)];
      sum += t.overlap;
      log.push_back({std::to_string(i), join_ints(t.kept, '|'), axes_string(t.axes),
                     bits_string(t.outcomes), axes_string(t.shadow.axes),
                     bits_string(t.shadow.outcomes), format_double(t.overlap)});
    }
    verdict["mean"] = sum / static_cast<double>(trials);
  }

  TestConfig cfg(config.epsilon, config.delta, omega.gap, 0.0, b);
  cfg.with_chi(chi);
  const double t0 = default_threshold(omega.gap, config.epsilon);
  const VerdictReport report =
      assess(cfg, verdict["mean"].get<double>(), trials, t0);
  accepted = report.accepted;
  verdict["threshold"] = report.threshold;
  verdict["accepted"] = report.accepted;
  verdict["type1_bound"] = report.type1_bound;
  verdict["type2_bound"] = report.type2_bound;

  if (config.format == "csv") {
    emit_table(config, out,
               {"trial", "kept", "axes", "outcomes", "shadow_axes", "shadow_outcomes",
                "omega_hat"},
               log,
               {{"seed", std::to_string(config.seed)},
                {"nu", format_double(omega.gap)},
                {"mean", format_double(verdict["mean"].get<double>())},
                {"threshold", format_double(report.threshold)},
                {"accepted", accepted ? "1" : "0"}});
  } else {
    out << verdict.dump(2) << '\n';
  }
  return accepted ? 0 : 1;
}

int cmd_sweep(const ExperimentConfig& config, std::ostream& out, bool histogram) {
  if (config.samples < 1) throw validation_error("sweep: need at least one sample");
  const auto gaps = run_indexed<double>(
      config.samples, thread_count(config), [&](long long i) {
        ExperimentConfig sample = config;
        sample.target = "haar";
        sample.seed = sample_seed(config.seed, i);
        return gap_of(Target(haar_random(config.n, sample.seed)), sample);
      });
  double mean = 0.0;
  for (double g : gaps) mean += g;
  mean /= static_cast<double>(config.samples);
  double variance = 0.0;
  for (double g : gaps) variance += (g - mean) * (g - mean);
  variance /= static_cast<double>(config.samples);

  const std::vector<std::pair<std::string, std::string>> metadata = {
      {"seed", std::to_string(config.seed)},
      {"samples", std::to_string(config.samples)},
      {"protocol", config.protocol},
      {"level", std::to_string(config.level)},
      {"mean_nu", format_double(mean)},
      {"stddev_nu", format_double(std::sqrt(variance))}};

  if (!histogram) {
    std::vector<std::vector<std::string>> rows;
    for (long long i = 0; i < config.samples; ++i) {
      rows.push_back({std::to_string(i),
                      std::to_string(sample_seed(config.seed, i)),
                      format_double(gaps[static_cast<std::size_t>(i)])});
    }
    emit_table(config, out, {"sample", "target_seed", "nu"}, rows, metadata);
    return 0;
  }

  if (config.bins < 1) throw validation_error("hist: need at least one bin");
  std::vector<long long> counts(static_cast<std::size_t>(config.bins), 0);
  for (double g : gaps) {
    const int bin = std::clamp(static_cast<int>(g * config.bins), 0, config.bins - 1);
    ++counts[static_cast<std::size_t>(bin)];
  }
  std::vector<std::vector<std::string>> rows;
  for (int bin = 0; bin < config.bins; ++bin) {
    rows.push_back({format_double(static_cast<double>(bin) / config.bins),
                    format_double(static_cast<double>(bin + 1) / config.bins),
                    std::to_string(counts[static_cast<std::size_t>(bin)])});
  }
  emit_table(config, out, {"bin_low", "bin_high", "count"}, rows, metadata);
  return 0;
}

int cmd_complexity(const ExperimentConfig& config, std::ostream& out) {
  std::vector<std::vector<std::string>> rows;
  for (int level = 1; level <= config.level; ++level) {
    ExperimentConfig at_level = config;
    at_level.level = level;
    double nu_shared = config.nu;
    double nu_sop = nu_shared, nu_dpso = nu_shared;
    if (nu_shared <= 0.0) {
      const Target target = resolve_target(config);
      ExperimentConfig probe = at_level;
      probe.protocol = "sop";
      nu_sop = gap_of(target, probe);
      probe.protocol = "dpso";
      nu_dpso = gap_of(target, probe);
    }
    if (nu_sop <= 0.0 || nu_dpso <= 0.0) {
      throw zero_gap_error("complexity: gapless strategy at level " + std::to_string(level) +
                           " (supply --nu or choose another target)");
    }
    TestConfig sop_cfg(config.epsilon, config.delta, nu_sop, 0.0, 1.0);
    TestConfig dpso_cfg(config.epsilon, config.delta, nu_dpso, 0.0, 1.0);
    rows.push_back({std::to_string(level),
                    format_double(nu_dpso),
                    std::to_string(plm_sample_complexity(config.epsilon, config.delta, nu_dpso)),
                    format_double(nu_sop),
                    std::to_string(sop_sample_complexity(level, sop_cfg)),
                    std::to_string(dpso_sample_complexity(level, dpso_cfg)),
                    std::to_string(1LL << (2 * level - 2))});
  }
  emit_table(config, out,
             {"level", "nu_plm_dpso", "n_plm", "nu_sop", "n_sop", "n_dpso",
              "sop_dpso_ratio"},
             rows,
             {{"epsilon", format_double(config.epsilon)},
              {"delta", format_double(config.delta)},
              {"seed", std::to_string(config.seed)}});
  return 0;
}

int cmd_ghz_check(const ExperimentConfig& config, std::ostream& out) {
  const int n_max = std::max(3, config.n);
  bool all_match = true;
  std::vector<std::vector<std::string>> rows;
  for (int n = 3; n <= n_max; ++n) {
    const StabilizerGroup group(ghz(n).stabilizer.generators);
    for (int r = 1; r <= n - 1; ++r) {
      const int t = n - r;
      const double naive = uniform_gap(group, t, GapScheme::naive).nu;
      const double classes = uniform_gap(group, t, GapScheme::ghz_classes).nu;
      const double want_naive = std::pow(2.0 / 3.0, t);
      const double want_classes = 2.0 / (t + 2.0);
      const bool match = std::abs(naive - want_naive) <= 1e-10 &&
                         std::abs(classes - want_classes) <= 1e-10;
      all_match = all_match && match;
      rows.push_back({std::to_string(n), std::to_string(r), format_double(naive),
                      format_double(want_naive), format_double(classes),
                      format_double(want_classes), match ? "1" : "0"});
    }
  }
  emit_table(config, out,
             {"n", "level", "nu_naive", "expected_naive", "nu_classes", "expected_classes",
              "match"},
             rows, {{"all_match", all_match ? "1" : "0"}});
  return all_match ? 0 : 1;
}

}  // namespace

int run_command(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    std::ofstream file;
    std::ostream* sink = &out;
    if (!config.out.empty()) {
      file.open(config.out);
      if (!file) throw validation_error("cannot open output file: " + config.out);
      sink = &file;
    }
    if (config.format != "csv" && config.format != "json") {
      throw validation_error("unknown format \"" + config.format + "\" (expected csv or json)");
    }
    if (config.command == "gap") return cmd_gap(config, *sink);
    if (config.command == "verify") return cmd_verify(config, *sink);
    if (config.command == "sweep") return cmd_sweep(config, *sink, false);
    if (config.command == "hist") return cmd_sweep(config, *sink, true);
    if (config.command == "complexity") return cmd_complexity(config, *sink);
    if (config.command == "ghz-check") return cmd_ghz_check(config, *sink);
    throw validation_error("unknown command \"" + config.command + "\"");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace qsv
