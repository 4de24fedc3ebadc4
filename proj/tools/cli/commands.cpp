#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lgsim/lgsim.hpp"

namespace lgsim::cli {

namespace {

using nlohmann::json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse_error:
      return kUsage;
    case ErrorCode::degenerate_filter:
    case ErrorCode::no_feasible_point:
    case ErrorCode::io_error:
      return kRuntime;
    default:
      return kValidation;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes to `path`, or to `fallback` when the path is empty.
void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io_error, "cannot write " + path);
  out << text;
  out.flush();
  if (!out) fail(ErrorCode::io_error, "write failed for " + path);
}

// ---------------------------------------------------------------- sweep

struct SweepConfig {
  double v_start = 0.0;
  double v_stop = 1.0;
  std::size_t v_steps = 101;
  std::vector<double> d_values{0.45, 0.99};
  bool filtered = true;
  MeasurementScenario scenario = canonical_scenario();
  std::string output_path;
  std::string format = "csv";
};

struct SweepFlags {
  double v_start = 0.0;
  double v_stop = 1.0;
  std::size_t v_steps = 101;
  std::vector<double> d_values;
  bool filtered = true;
  std::string scenario;
  std::string config_path;
  std::string output_path;
  std::string format;
};

BlochVector bloch_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) fail(ErrorCode::invalid_config, "Bloch vectors need 3 entries");
  BlochVector n{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!j[i].is_number()) fail(ErrorCode::invalid_config, "Bloch entries must be numbers");
    n[i] = j[i].get<double>();
  }
  return n;
}

MeasurementScenario scenario_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "canonical") {
      fail(ErrorCode::invalid_config, "unknown scenario \"" + j.get<std::string>() + "\"");
    }
    return canonical_scenario();
  }
  if (!j.is_object() || !j.contains("t0") || !j.contains("t1")) {
    fail(ErrorCode::invalid_config, "explicit scenario needs \"t0\" and \"t1\"");
  }
  MeasurementScenario scen = canonical_scenario();
  for (const char* slot : {"t0", "t1"}) {
    const json& list = j[slot];
    if (!list.is_array() || list.size() != 2) {
      fail(ErrorCode::invalid_config, std::string(slot) + " needs two Bloch vectors");
    }
    auto& target = std::string(slot) == "t0" ? scen.t0 : scen.t1;
    for (std::size_t k = 0; k < 2; ++k) target[k] = observable_from_bloch(bloch_from_json(list[k]));
  }
  return scen;
}

void apply_config_file(SweepConfig& cfg, const std::string& path) {
  const std::string text = read_file(path);
  const json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    fail(ErrorCode::parse_error, path + " is not a JSON object");
  }
  try {
    if (doc.contains("v_range")) {
      const json& r = doc["v_range"];
      if (r.is_array() && r.size() == 3) {
        cfg.v_start = r[0].get<double>();
        cfg.v_stop = r[1].get<double>();
        cfg.v_steps = r[2].get<std::size_t>();
      } else if (r.is_object()) {
        cfg.v_start = r.value("start", cfg.v_start);
        cfg.v_stop = r.value("stop", cfg.v_stop);
        cfg.v_steps = r.value("steps", cfg.v_steps);
      } else {
        fail(ErrorCode::invalid_config, "v_range must be [start, stop, steps]");
      }
    }
    if (doc.contains("d_values")) cfg.d_values = doc["d_values"].get<std::vector<double>>();
    if (doc.contains("filtered")) cfg.filtered = doc["filtered"].get<bool>();
    if (doc.contains("scenario")) cfg.scenario = scenario_from_json(doc["scenario"]);
    if (doc.contains("output_path")) cfg.output_path = doc["output_path"].get<std::string>();
    if (doc.contains("format")) cfg.format = doc["format"].get<std::string>();
  } catch (const json::exception& e) {
    fail(ErrorCode::invalid_config, std::string("config field has the wrong type: ") + e.what());
  }
}

void validate(const SweepConfig& cfg) {
  if (!(cfg.v_start >= 0.0 && cfg.v_start <= cfg.v_stop && cfg.v_stop <= 1.0)) {
    fail(ErrorCode::invalid_config, "need 0 <= v_start <= v_stop <= 1");
  }
  if (cfg.v_steps < 2) fail(ErrorCode::invalid_config, "v_steps must be at least 2");
  if (cfg.d_values.empty()) fail(ErrorCode::invalid_config, "d_values is empty");
  for (double d : cfg.d_values) {
    // D = 1 leaves nothing to normalize by.
    if (!(d >= 0.0 && d < 1.0)) fail(ErrorCode::invalid_config, "every D must lie in [0, 1)");
  }
  if (cfg.format != "csv" && cfg.format != "json") {
    fail(ErrorCode::invalid_config, "format must be csv or json");
  }
}

struct SweepRow {
  double v = 0.0;
  double d = 0.0;
  double b_unfiltered = 0.0;
  double b_filtered = 0.0;
  double n = 0.0;
};

SweepRow sweep_point(double v, double d, bool filtered, const MeasurementScenario& scen) {
  const KrausChannel ch = amplitude_damping(v);
  SweepRow row{v, d, chsh_evaluate(two_time_distribution(ch, scen)).value, 0.0, 1.0};
  if (!filtered) {
    row.b_filtered = row.b_unfiltered;
    return row;
  }
  const auto [pre, post] = sppo_pair(d);
  const TwoTimeStatistics stats =
      filtered_two_time_distribution(ch, as_channel(pre), as_channel(post), scen);
  row.b_filtered = chsh_evaluate(stats).value;
  row.n = stats.success_prob(1, 1);
  for (int x : kSettings) {
    for (int a : kOutcomes) row.n = std::min(row.n, stats.success_prob(a, x));
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  std::vector<std::pair<double, double>> points;
  for (double d : cfg.d_values) {
    for (std::size_t i = 0; i < cfg.v_steps; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(cfg.v_steps - 1);
      const double v = i + 1 == cfg.v_steps ? cfg.v_stop : cfg.v_start + t * (cfg.v_stop - cfg.v_start);
      points.emplace_back(v, d);
    }
  }

  std::vector<std::optional<SweepRow>> rows(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        rows[i] = sweep_point(points[i].first, points[i].second, cfg.filtered, cfg.scenario);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(1, points.size() / 64));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<SweepRow> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(*rows[i]);
  }
  return out;
}

bool violates(double b) { return b > 2.0 + kViolationMargin; }

std::string render_sweep(const std::vector<SweepRow>& rows, const std::string& format) {
  std::ostringstream out;
  if (format == "csv") {
    out << "v,D,B_unfiltered,B_filtered,N,violated_unfiltered,violated_filtered\n";
    for (const auto& r : rows) {
      out << format_number(r.v) << ',' << format_number(r.d) << ',' << format_number(r.b_unfiltered)
          << ',' << format_number(r.b_filtered) << ',' << format_number(r.n) << ','
          << (violates(r.b_unfiltered) ? "true" : "false") << ','
          << (violates(r.b_filtered) ? "true" : "false") << '\n';
    }
    return out.str();
  }
  json list = json::array();
  for (const auto& r : rows) {
    list.push_back({{"v", r.v},
                    {"D", r.d},
                    {"B_unfiltered", r.b_unfiltered},
                    {"B_filtered", r.b_filtered},
                    {"N", r.n},
                    {"violated_unfiltered", violates(r.b_unfiltered)},
                    {"violated_filtered", violates(r.b_filtered)}});
  }
  out << json{{"rows", list}}.dump(2) << '\n';
  return out.str();
}

// ------------------------------------------------------------- classify

struct ClassifyFlags {
  std::string channel_path;
  std::size_t resolution = 21;
  std::string output_path;
  std::string stats_prefix;
};

std::string classification_label(bool violated, bool activated) {
  if (violated) return "nonmacrorealistic";
  return activated ? "hidden_nonmacrorealistic" : "macrorealistic";
}

int run_classify(const ClassifyFlags& flags, std::ostream& out) {
  const KrausChannel ch = parse_channel(read_file(flags.channel_path));
  if (ch.kind() != ChannelKind::trace_preserving) {
    fail(ErrorCode::invalid_channel, "classify expects a trace-preserving (\"tp\") channel");
  }
  if (ch.input_dim() != 2 || ch.output_dim() != 2) {
    fail(ErrorCode::invalid_channel, "classify expects a qubit channel");
  }
  const MeasurementScenario& scen = canonical_scenario();
  const TwoTimeStatistics stats = two_time_distribution(ch, scen);
  const ChshReport report = chsh_evaluate(stats);
  const ActivationResult activation = activate(ch, scen, SearchFamily::sppo, flags.resolution);
  const ActivationResult extended =
      activate(ch, scen, SearchFamily::sppo_independent, flags.resolution);
  const NonlocalityVerdict verdict = strongly_breaking_assessment(ch, flags.resolution);

  json doc;
  doc["chsh"] = to_json(report);
  doc["macrorealistic"] = macrorealism_chsh_check(stats);
  doc["classification"] = classification_label(report.violated, activation.activated);
  doc["activation"] = to_json(activation);
  doc["activation_extended"] = to_json(extended);
  doc["nonlocality"] = to_json(verdict);

  if (!flags.stats_prefix.empty()) {
    std::ostringstream csv;
    write_statistics_csv(stats, csv);
    emit(flags.stats_prefix + ".csv", csv.str(), out);
    emit(flags.stats_prefix + ".N.json", success_sidecar(stats).dump(2) + "\n", out);
  }
  emit(flags.output_path, doc.dump(2) + "\n", out);
  return kOk;
}

// ----------------------------------------------------------- experiment

struct ExperimentFlags {
  double v = 0.0;
  double d = 0.45;
  bool filtered = false;
  std::size_t shots = 10000;
  std::size_t replicates = 100;
  std::uint64_t seed = 1;
  std::string noise = "ideal";
  std::optional<double> waveplate_sigma;
  std::optional<double> d_sigma;
  std::optional<double> polarization_sigma;
  std::optional<double> visibility_min;
  std::optional<double> visibility_max;
  std::string output_path;
};

int run_experiment(const ExperimentFlags& flags, std::ostream& out) {
  NoiseModel noise = flags.noise == "lab" ? NoiseModel{} : NoiseModel::ideal();
  if (flags.waveplate_sigma) noise.waveplate_angle_sigma = *flags.waveplate_sigma;
  if (flags.d_sigma) noise.d_relative_sigma = *flags.d_sigma;
  if (flags.polarization_sigma) noise.incident_polarization_sigma = *flags.polarization_sigma;
  if (flags.visibility_min) noise.visibility_min = *flags.visibility_min;
  if (flags.visibility_max) noise.visibility_max = *flags.visibility_max;

  const ExperimentPoint point = experiment_point(flags.v, flags.d, flags.filtered, flags.shots,
                                                 flags.replicates, noise, flags.seed);
  std::ostringstream csv;
  csv << "v,D,filtered,shots,replicates,mean_B,err_B,seed\n"
      << format_number(flags.v) << ',' << format_number(flags.d) << ','
      << (flags.filtered ? "true" : "false") << ',' << flags.shots << ',' << flags.replicates << ','
      << format_number(point.mean_b) << ',' << format_number(point.error_bar) << ',' << flags.seed
      << '\n';
  emit(flags.output_path, csv.str(), out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Temporal CHSH (Leggett-Garg) simulator for qubit channels", "lgsim"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "lgsim 0.1.0");

  SweepFlags sweep;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Tabulate temporal CHSH values over the amplitude-damping family");
  auto* opt_v_start = sweep_cmd->add_option("--v-start", sweep.v_start, "First v (default 0)");
  auto* opt_v_stop = sweep_cmd->add_option("--v-stop", sweep.v_stop, "Last v (default 1)");
  auto* opt_v_steps = sweep_cmd->add_option("--v-steps", sweep.v_steps, "Number of v points (default 101)");
  auto* opt_d = sweep_cmd->add_option("--d,--D", sweep.d_values, "Filter loss D, repeatable (default 0.45 0.99)");
  auto* opt_filtered = sweep_cmd->add_flag("--filtered,!--unfiltered", sweep.filtered,
                                           "Evaluate the filtered column (default on)");
  auto* opt_scenario = sweep_cmd->add_option("--scenario", sweep.scenario, "Named scenario")
                           ->check(CLI::IsMember({"canonical"}));
  sweep_cmd->add_option("--config", sweep.config_path, "JSON config file; flags take precedence")
      ->check(CLI::ExistingFile);
  auto* opt_output = sweep_cmd->add_option("-o,--output", sweep.output_path, "Output file (default stdout)");
  auto* opt_format = sweep_cmd->add_option("--format", sweep.format, "csv or json")
                         ->check(CLI::IsMember({"csv", "json"}));

  ClassifyFlags classify;
  CLI::App* classify_cmd =
      app.add_subcommand("classify", "Classify a channel document (JSON Kraus operators)");
  classify_cmd->add_option("--channel", classify.channel_path, "Channel JSON file")->required();
  classify_cmd->add_option("--resolution", classify.resolution, "Grid points per filter parameter")
      ->check(CLI::Range(2, 1000));
  classify_cmd->add_option("-o,--output", classify.output_path, "Output file (default stdout)");
  classify_cmd->add_option("--stats-prefix", classify.stats_prefix,
                           "Also write <prefix>.csv and <prefix>.N.json with the unfiltered table");

  ExperimentFlags experiment;
  CLI::App* experiment_cmd =
      app.add_subcommand("experiment", "Emulate one photon-counting data point");
  experiment_cmd->add_option("--v", experiment.v, "Damping strength v")->required();
  experiment_cmd->add_option("--D,--d", experiment.d, "Filter loss D (default 0.45)");
  experiment_cmd->add_flag("--filtered", experiment.filtered, "Apply the pre/post filters");
  experiment_cmd->add_option("--shots", experiment.shots, "Shots per setting pair (default 10000)")
      ->check(CLI::PositiveNumber);
  experiment_cmd->add_option("--replicates", experiment.replicates, "Replicates (default 100)")
      ->check(CLI::PositiveNumber);
  experiment_cmd->add_option("--seed", experiment.seed, "RNG seed (default 1)");
  experiment_cmd->add_option("--noise", experiment.noise, "ideal or lab (default ideal)")
      ->check(CLI::IsMember({"ideal", "lab"}));
  experiment_cmd->add_option("--waveplate-sigma", experiment.waveplate_sigma, "Waveplate angle error, rad");
  experiment_cmd->add_option("--d-sigma", experiment.d_sigma, "Relative error on D");
  experiment_cmd->add_option("--polarization-sigma", experiment.polarization_sigma,
                             "Incident polarization error, rad");
  experiment_cmd->add_option("--visibility-min", experiment.visibility_min, "Lowest visibility");
  experiment_cmd->add_option("--visibility-max", experiment.visibility_max, "Highest visibility");
  experiment_cmd->add_option("-o,--output", experiment.output_path, "Output file (default stdout)");

  try {
    // CLI11 consumes a vector from the back.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*sweep_cmd) {
      SweepConfig cfg;
      if (!sweep.config_path.empty()) apply_config_file(cfg, sweep.config_path);
      if (opt_v_start->count()) cfg.v_start = sweep.v_start;
      if (opt_v_stop->count()) cfg.v_stop = sweep.v_stop;
      if (opt_v_steps->count()) cfg.v_steps = sweep.v_steps;
      if (opt_d->count()) cfg.d_values = sweep.d_values;
      if (opt_filtered->count()) cfg.filtered = sweep.filtered;
      if (opt_scenario->count()) cfg.scenario = canonical_scenario();
      if (opt_output->count()) cfg.output_path = sweep.output_path;
      if (opt_format->count()) cfg.format = sweep.format;
      validate(cfg);
      emit(cfg.output_path, render_sweep(run_sweep(cfg), cfg.format), out);
      return kOk;
    }
    if (*classify_cmd) return run_classify(classify, out);
    if (*experiment_cmd) return run_experiment(experiment, out);
  } catch (const Error& e) {
    err << "lgsim: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "lgsim: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}

}  // namespace lgsim::cli
