#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "drivebench/dataset.hpp"
#include "drivebench/driver.hpp"
#include "drivebench/ledger.hpp"
#include "drivebench/metrics.hpp"
#include "drivebench/parallel.hpp"
#include "drivebench/suite.hpp"

// Exit codes: 0 success, 1 usage error, 2 data error (bad files, malformed
// input, aborted routes).

namespace fs = std::filesystem;
using namespace drivebench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// Values from a `--config key = value` file override command-line flags.
// Each command registers the overridable keys it understands.
class ConfigOverrides {
 public:
  void bind(const std::string& key, double* target) {
    setters_[key] = [target](const std::string& text) { *target = std::stod(text); };
  }
  void bind(const std::string& key, std::uint64_t* target) {
    setters_[key] = [target](const std::string& text) { *target = std::stoull(text); };
  }
  void bind(const std::string& key, std::string* target) {
    setters_[key] = [target](const std::string& text) { *target = text; };
  }

  void apply(const std::string& path) const {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open config file");
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
      ++line_number;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        if (line.find_first_not_of(" \t\r") != std::string::npos)
          throw std::runtime_error(path + ":" + std::to_string(line_number) +
                                   ": expected key = value");
        continue;
      }
      auto trim = [](std::string s) {
        const auto first = s.find_first_not_of(" \t\r");
        if (first == std::string::npos) return std::string();
        const auto last = s.find_last_not_of(" \t\r");
        return s.substr(first, last - first + 1);
      };
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      const auto it = setters_.find(key);
      if (it == setters_.end())
        throw std::runtime_error(path + ":" + std::to_string(line_number) + ": unknown key '" +
                                 key + "'");
      it->second(value);
    }
  }

 private:
  std::map<std::string, std::function<void(const std::string&)>> setters_;
};

void ensure_parent(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

std::string default_out_dir() {
  if (const char* env = std::getenv("DRIVEBENCH_OUT")) return env;
  return "out";
}

plan::StylePreset preset_by_name(const std::string& name) {
  return name == "adjusted" ? plan::adjusted_preset() : plan::default_preset();
}

struct SuiteFlags {
  std::string suite_path;
  std::string style{"default"};
  std::uint64_t seed{0};
  double dt{0.05};
  std::string out_dir = default_out_dir();
  std::string config_path;
  ConfigOverrides overrides;

  void attach(CLI::App* cmd) {
    cmd->add_option("--suite", suite_path, "Suite file with the routes to run")->required();
    cmd->add_option("--style", style, "Driving style preset")
        ->check(CLI::IsMember({"default", "adjusted"}))
        ->capture_default_str();
    cmd->add_option("--seed", seed, "Top-level seed; per-route streams derive from it")
        ->capture_default_str();
    cmd->add_option("--dt", dt, "Simulation step in seconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--out", out_dir, "Output directory (env DRIVEBENCH_OUT sets the default)")
        ->capture_default_str();
    cmd->add_option("--config", config_path, "key = value file; its values override flags");
    overrides.bind("suite", &suite_path);
    overrides.bind("style", &style);
    overrides.bind("seed", &seed);
    overrides.bind("dt", &dt);
    overrides.bind("out", &out_dir);
  }

  par::SuiteRunConfig run_config(double early_stop_km = -1.0) const {
    par::SuiteRunConfig config;
    config.preset = preset_by_name(style);
    config.world.dt = dt;
    config.limits.early_stop_km = early_stop_km;
    config.seed = seed;
    return config;
  }
};

void append_csv_number(std::string& row, double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, ",%.6g", value);
  row += buffer;
}

std::string summary_csv(const std::vector<par::RouteOutcome>& outcomes,
                        const metrics::PenaltyTable& table) {
  std::string csv = "route,rc,is,ds,i,ds_hat,cp,cv,cl,rl,si,st,ye,km,aborted\n";
  std::vector<sim::InfractionLedger> ledgers;
  for (const auto& outcome : outcomes) {
    const auto& ledger = outcome.result.ledger;
    ledgers.push_back(ledger);
    const metrics::RouteScore score = metrics::score_route(ledger, table);
    std::string row = outcome.route_id;
    for (double value : {score.rc, score.is, score.ds, score.coefficient, score.ds_hat})
      append_csv_number(row, value);
    for (int count : ledger.counts) append_csv_number(row, count);
    append_csv_number(row, ledger.distance_km);
    row += ledger.aborted ? ",1\n" : ",0\n";
    csv += row;
  }
  if (!outcomes.empty()) {
    const metrics::Summary summary = metrics::aggregate(ledgers, table);
    std::string row = "mean";
    for (double value : {summary.mean.rc, summary.mean.is, summary.mean.ds,
                         summary.mean.coefficient, summary.mean.ds_hat})
      append_csv_number(row, value);
    // The mean row reports per-km rates in the infraction columns.
    double total_km = 0.0;
    for (const auto& ledger : ledgers) total_km += ledger.distance_km;
    for (double rate : summary.rate_per_km) append_csv_number(row, rate);
    append_csv_number(row, total_km);
    row += ",\n";
    csv += row;
  }
  return csv;
}

int cmd_run(const SuiteFlags& flags, double cutoff_km) {
  const auto routes = sim::load_suite_file(flags.suite_path);
  const auto outcomes = par::run_suite(routes, flags.run_config(cutoff_km));
  fs::create_directories(flags.out_dir);
  for (const auto& outcome : outcomes) {
    const fs::path path = fs::path(flags.out_dir) / (outcome.route_id + ".ledger");
    sim::write_ledger_file(path.string(), outcome.route_id, outcome.result.ledger);
  }
  const std::string csv = summary_csv(outcomes, {});
  std::ofstream summary_file(fs::path(flags.out_dir) / "summary.csv");
  summary_file << csv;
  std::cout << csv;
  for (const auto& outcome : outcomes) {
    if (outcome.result.ledger.aborted) {
      std::cerr << "route " << outcome.route_id << " aborted\n";
      return kExitData;
    }
  }
  return kExitOk;
}

int cmd_collect(const SuiteFlags& flags) {
  const auto routes = sim::load_suite_file(flags.suite_path);
  const auto outcomes = par::run_suite(routes, flags.run_config());
  fs::create_directories(flags.out_dir);
  bool aborted = false;
  std::vector<data::FrameRecord> combined;
  for (const auto& outcome : outcomes) {
    const fs::path path = fs::path(flags.out_dir) / (outcome.route_id + ".framelog");
    data::write_frame_log_file(path.string(), outcome.result.frames);
    combined.insert(combined.end(), outcome.result.frames.begin(), outcome.result.frames.end());
    std::cout << outcome.route_id << ": " << outcome.result.frames.size() << " frames\n";
    aborted = aborted || outcome.result.ledger.aborted;
  }
  const fs::path combined_path = fs::path(flags.out_dir) / "suite.framelog";
  data::write_frame_log_file(combined_path.string(), combined);
  std::cout << "suite: " << combined.size() << " frames\n";
  if (aborted) {
    std::cerr << "at least one route aborted; logs are partial\n";
    return kExitData;
  }
  return kExitOk;
}

int cmd_filter(const std::string& log_path, const std::string& out_path,
               const data::FilterParams& params, std::uint64_t seed) {
  const auto log = data::read_frame_log_file(log_path);
  const auto [kept, stats] = par::filter_frames_parallel(log, params, seed);
  data::write_frame_log_file(out_path, kept);
  std::printf("frames: %zu\n", stats.total);
  std::printf("change frames: %zu\n", stats.change);
  std::printf("change fraction: %.4f\n", stats.change_fraction);
  std::printf("kept: %zu\n", stats.kept);
  std::printf("kept fraction: %.4f\n", stats.kept_fraction);
  return kExitOk;
}

int cmd_labels(const std::string& log_path, const std::string& labels_path,
               const std::string& weights_path) {
  const auto log = data::read_frame_log_file(log_path);
  std::array<std::uint64_t, data::kClassCount> counts{};
  std::string labels_csv = "route,frame,target_speed";
  for (std::size_t c = 0; c < data::kClassCount; ++c) {
    char header[16];
    std::snprintf(header, sizeof header, ",w%zu", c);
    labels_csv += header;
  }
  labels_csv += "\n";
  for (const auto& frame : log) {
    const data::TwoHotLabel label = data::encode_two_hot(frame.target_speed);
    std::string row = frame.route_id;
    char buffer[48];
    std::snprintf(buffer, sizeof buffer, ",%llu,%.6g",
                  static_cast<unsigned long long>(frame.frame_index), frame.target_speed);
    row += buffer;
    for (double w : label.weights) append_csv_number(row, w);
    row += "\n";
    labels_csv += row;
    // Count each frame toward its dominant class; ties go to the lower one.
    std::size_t best = 0;
    for (std::size_t c = 1; c < data::kClassCount; ++c)
      if (label.weights[c] > label.weights[best]) best = c;
    ++counts[best];
  }
  std::ofstream(labels_path) << labels_csv;
  std::string weights_csv = "class_value,count,weight\n";
  const data::ClassWeights weights = data::class_weights(counts);
  for (std::size_t c = 0; c < data::kClassCount; ++c) {
    char row[64];
    std::snprintf(row, sizeof row, "%.6g,%llu,%.6g\n", data::kClassValues[c],
                  static_cast<unsigned long long>(counts[c]), weights.weights[c]);
    weights_csv += row;
  }
  std::ofstream(weights_path) << weights_csv;
  std::cout << weights_csv;
  return kExitOk;
}

int cmd_score(const std::string& ledger_dir, double alpha, bool normalized,
              const std::string& out_path) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(ledger_dir))
    if (entry.path().extension() == ".ledger") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error(ledger_dir + ": no .ledger files");
  std::vector<par::RouteOutcome> outcomes;
  for (const auto& file : files) {
    par::RouteOutcome outcome;
    outcome.route_id = sim::read_ledger_file(file.string(), outcome.result.ledger);
    outcomes.push_back(std::move(outcome));
  }
  metrics::PenaltyTable table;
  table.alpha = alpha;
  const std::string csv = summary_csv(outcomes, table);
  std::cout << csv;
  if (!out_path.empty()) std::ofstream(out_path) << csv;
  std::vector<sim::InfractionLedger> ledgers;
  for (const auto& outcome : outcomes) ledgers.push_back(outcome.result.ledger);
  const metrics::Summary summary = metrics::aggregate(ledgers, table);
  std::fprintf(stderr, "headline %s mean: %.4f\n", normalized ? "ds_hat" : "ds",
               normalized ? summary.mean.ds_hat : summary.mean.ds);
  return kExitOk;
}

int cmd_analyze_et(double coefficient, double length_km, int samples, const std::string& csv_path,
                   const std::string& svg_path) {
  const metrics::OptimalStop best = metrics::x_opt(coefficient, length_km);
  std::string csv = "x,expected_ds,normalized_ds\n";
  for (int i = 0; i <= samples; ++i) {
    const double x = static_cast<double>(i) / samples;
    char row[96];
    std::snprintf(row, sizeof row, "%.6g,%.10g,%.10g\n", x,
                  metrics::expected_ds(x, coefficient, length_km),
                  metrics::normalized_ds(x, coefficient));
    csv += row;
  }
  if (!csv_path.empty()) {
    ensure_parent(csv_path);
    std::ofstream(csv_path) << csv;
  }
  if (!svg_path.empty()) {
    ensure_parent(svg_path);
    std::ofstream svg(svg_path);
    metrics::write_ds_curves_svg(svg, coefficient, length_km);
  }
  std::printf("x_max = %.3f\n", best.x);
  std::printf("d = %.2f km\n", best.x * length_km);
  std::printf("DS_max = %.2f\n", best.ds);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop 2D driving benchmark: run suites, collect and filter frame logs, "
               "compute labels, and score ledgers"};
  app.require_subcommand(1);

  SuiteFlags run_flags;
  double cutoff_km = -1.0;
  auto* run = app.add_subcommand("run", "Run a suite and write per-route ledgers plus summary.csv");
  run_flags.attach(run);
  run->add_option("--cutoff-km", cutoff_km,
                  "Early-termination cutoff; the ego deliberately stops after this distance");
  run_flags.overrides.bind("cutoff-km", &cutoff_km);

  SuiteFlags collect_flags;
  auto* collect =
      app.add_subcommand("collect", "Run a suite and write one frame log per route");
  collect_flags.attach(collect);

  std::string filter_log;
  std::string filter_out;
  data::FilterParams filter_params;
  std::uint64_t filter_seed = 0;
  std::string filter_config;
  ConfigOverrides filter_overrides;
  auto* filter = app.add_subcommand(
      "filter", "Drop redundant frames from a log, keeping change frames and a random fraction");
  filter->add_option("--log", filter_log, "Frame log to filter")->required();
  filter->add_option("--out", filter_out, "Filtered log destination (default <log>.filtered)");
  filter->add_option("--dv", filter_params.dv, "Target-speed change threshold in m/s")
      ->capture_default_str();
  filter->add_option("--dangle", filter_params.dangle_deg,
                     "Checkpoint bearing change threshold in degrees")
      ->capture_default_str();
  filter->add_option("--keep", filter_params.keep_frac, "Retention probability for non-change frames")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  filter->add_option("--seed", filter_seed, "Retention seed")->capture_default_str();
  filter->add_option("--config", filter_config, "key = value file; its values override flags");
  filter_overrides.bind("log", &filter_log);
  filter_overrides.bind("out", &filter_out);
  filter_overrides.bind("dv", &filter_params.dv);
  filter_overrides.bind("dangle", &filter_params.dangle_deg);
  filter_overrides.bind("keep", &filter_params.keep_frac);
  filter_overrides.bind("seed", &filter_seed);

  std::string labels_log;
  std::string labels_out;
  std::string weights_out;
  auto* labels = app.add_subcommand(
      "labels", "Emit two-hot target-speed labels and anti-proportional class weights as CSV");
  labels->add_option("--log", labels_log, "Frame log to label")->required();
  labels->add_option("--labels-out", labels_out, "Two-hot CSV destination");
  labels->add_option("--weights-out", weights_out, "Class-weight CSV destination");

  std::string score_dir;
  double alpha = 1.0;
  bool normalized = false;
  std::string score_out;
  auto* score = app.add_subcommand("score", "Score a directory of ledgers as CSV");
  score->add_option("--ledgers", score_dir, "Directory holding .ledger files")->required();
  score->add_option("--alpha", alpha, "Penalty scale applied to every base factor")
      ->check(CLI::Range(1e-9, 1.0))
      ->capture_default_str();
  score->add_flag("--normalized", normalized, "Report the DS_hat mean as the headline");
  score->add_option("--out", score_out, "Also write the CSV here");

  double et_coefficient = 0.0;
  double et_length = 0.0;
  int et_samples = 1000;
  std::string et_csv;
  std::string et_svg;
  auto* analyze = app.add_subcommand(
      "analyze-et", "Early-termination analysis: optimal stop fraction and score curves");
  analyze->add_option("--I", et_coefficient, "Per-km infraction coefficient")
      ->required()
      ->check(CLI::Range(1e-9, 1.0));
  analyze->add_option("--L", et_length, "Route length in km")->required()->check(CLI::PositiveNumber);
  analyze->add_option("--samples", et_samples, "CSV curve sample count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  analyze->add_option("--csv-out", et_csv, "Curve CSV destination");
  analyze->add_option("--svg-out", et_svg, "Curve SVG destination");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run) {
      if (!run_flags.config_path.empty()) run_flags.overrides.apply(run_flags.config_path);
      return cmd_run(run_flags, cutoff_km);
    }
    if (*collect) {
      if (!collect_flags.config_path.empty())
        collect_flags.overrides.apply(collect_flags.config_path);
      return cmd_collect(collect_flags);
    }
    if (*filter) {
      if (!filter_config.empty()) filter_overrides.apply(filter_config);
      if (filter_out.empty()) filter_out = filter_log + ".filtered";
      return cmd_filter(filter_log, filter_out, filter_params, filter_seed);
    }
    if (*labels) {
      const std::string out_dir = default_out_dir();
      if (labels_out.empty()) labels_out = (fs::path(out_dir) / "labels.csv").string();
      if (weights_out.empty()) weights_out = (fs::path(out_dir) / "class_weights.csv").string();
      ensure_parent(labels_out);
      ensure_parent(weights_out);
      return cmd_labels(labels_log, labels_out, weights_out);
    }
    if (*score) return cmd_score(score_dir, alpha, normalized, score_out);
    if (*analyze) {
      const std::string out_dir = default_out_dir();
      if (et_csv.empty()) et_csv = (fs::path(out_dir) / "et_curves.csv").string();
      if (et_svg.empty()) et_svg = (fs::path(out_dir) / "et_curves.svg").string();
      return cmd_analyze_et(et_coefficient, et_length, et_samples, et_csv, et_svg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}
