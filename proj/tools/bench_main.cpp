#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "memlane/harness.hpp"

namespace {

struct CliOptions {
  memlane::BenchConfig config;
  std::string schedule = "static";
  std::string layout = "ijkv";
  std::vector<unsigned> ctl_bits = {8, 7};
  unsigned bank_bit = 6;
  std::size_t line = 64;
  std::string csv;
  std::string config_file;
};

void add_common(CLI::App* cmd, CliOptions& o) {
  cmd->option_defaults()->always_capture_default();
  cmd->add_option("--kernel", o.config.kernel, "copy|scale|add|triad|vtriad|jacobi2d|lbm");
  cmd->add_option("--n", o.config.n, "elements (stream) or grid edge (jacobi2d/lbm)");
  cmd->add_option("--threads", o.config.threads, "worker count");
  cmd->add_option("--schedule", o.schedule, "static or static,<chunk>");
  cmd->add_option("--offset", o.config.offsets, "per-array byte offsets")->delimiter(',');
  cmd->add_option("--base-align", o.config.base_align, "array base alignment, bytes");
  cmd->add_option("--seg-align", o.config.seg_align, "segment alignment, bytes (0 = packed)");
  cmd->add_option("--shift", o.config.shift, "per-segment shift, bytes");
  cmd->add_option("--segments", o.config.segments, "segments per array (0 = auto)");
  cmd->add_flag("--common", o.config.common_block, "STREAM COMMON block emulation (analyze)");
  cmd->add_option("--pad-dim1", o.config.pad_dim1, "lbm first-dimension padding, elements");
  cmd->add_option("--layout", o.layout, "lbm data layout: ijkv|ivjk");
  cmd->add_flag("--coalesce", o.config.coalesce, "coalesce the lbm z/y loops");
  cmd->add_option("--lbm-elem", o.config.lbm_element_size, "lbm element size: 8 or 4");
  cmd->add_option("--reps", o.config.reps, "timed repetitions after warm-up");
  cmd->add_option("--scalar", o.config.scalar, "s in scale/triad");
  cmd->add_option("--ctl-bits", o.ctl_bits, "controller address bits, MSB first")->delimiter(',');
  cmd->add_option("--bank-bit", o.bank_bit, "bank address bit");
  cmd->add_option("--line", o.line, "cache line size, bytes");
  cmd->add_option("--bandwidth", o.config.bandwidth, "measured bandwidth, bytes/s (predict)");
  cmd->add_option("--trace-steps", o.config.trace_steps, "lockstep steps per trace (analyze)");
  cmd->add_option("--csv", o.csv, "write records to this CSV file");
  cmd->add_option("--config", o.config_file, "key=value config file (flags override it)");
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T value{};
  if (!(in >> value) || !(in >> std::ws).eof())
    throw std::invalid_argument("config: bad value '" + text + "' for " + key);
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw std::invalid_argument("config: bad boolean '" + text + "' for " + key);
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_value<T>(key, item));
  return out;
}

// Plain key=value file with the option names of the CLI flags; '#' starts a
// comment. Keys already given on the command line keep their flag values.
void apply_config_file(CLI::App* cmd, CliOptions& o) {
  if (o.config_file.empty()) return;
  std::ifstream in(o.config_file);
  if (!in) throw std::runtime_error("config: cannot open '" + o.config_file + "'");

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key=value at " + o.config_file + ":" +
                                  std::to_string(line_no));
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
      return s;
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (cmd->count("--" + key) > 0) continue;  // explicit flag wins

    auto& cfg = o.config;
    if (key == "kernel") cfg.kernel = value;
    else if (key == "n") cfg.n = parse_value<std::size_t>(key, value);
    else if (key == "threads") cfg.threads = parse_value<unsigned>(key, value);
    else if (key == "schedule") o.schedule = value;
    else if (key == "offset") cfg.offsets = parse_list<std::size_t>(key, value);
    else if (key == "base-align") cfg.base_align = parse_value<std::size_t>(key, value);
    else if (key == "seg-align") cfg.seg_align = parse_value<std::size_t>(key, value);
    else if (key == "shift") cfg.shift = parse_value<std::size_t>(key, value);
    else if (key == "segments") cfg.segments = parse_value<std::size_t>(key, value);
    else if (key == "common") cfg.common_block = parse_bool(key, value);
    else if (key == "pad-dim1") cfg.pad_dim1 = parse_value<std::size_t>(key, value);
    else if (key == "layout") o.layout = value;
    else if (key == "coalesce") cfg.coalesce = parse_bool(key, value);
    else if (key == "lbm-elem") cfg.lbm_element_size = parse_value<std::size_t>(key, value);
    else if (key == "reps") cfg.reps = parse_value<unsigned>(key, value);
    else if (key == "scalar") cfg.scalar = parse_value<double>(key, value);
    else if (key == "ctl-bits") o.ctl_bits = parse_list<unsigned>(key, value);
    else if (key == "bank-bit") o.bank_bit = parse_value<unsigned>(key, value);
    else if (key == "line") o.line = parse_value<std::size_t>(key, value);
    else if (key == "bandwidth") cfg.bandwidth = parse_value<double>(key, value);
    else if (key == "trace-steps") cfg.trace_steps = parse_value<std::size_t>(key, value);
    else if (key == "csv") o.csv = value;
    else
      throw std::invalid_argument("config: unknown key '" + key + "' at " + o.config_file + ":" +
                                  std::to_string(line_no));
  }
}

memlane::BenchConfig finalize(CLI::App* cmd, CliOptions& o) {
  apply_config_file(cmd, o);
  o.config.schedule = memlane::Schedule::parse(o.schedule);
  o.config.lbm_layout = memlane::parse_lbm_layout(o.layout);
  o.config.model.controller_bits = o.ctl_bits;
  o.config.model.bank_bit = o.bank_bit;
  o.config.model.line_size = o.line;
  return o.config;
}

void print_record(const memlane::BenchRecord& rec) {
  const auto& cfg = rec.config;
  std::printf("kernel=%s mode=%s n=%zu threads=%u schedule=%s\n", cfg.kernel.c_str(),
              memlane::to_string(cfg.mode), cfg.n, cfg.threads, cfg.schedule.to_string().c_str());
  if (memlane::thrashing_candidate(cfg))
    std::printf("  note: first dimension %zu is a multiple of 64 elements; cache thrashing "
                "likely, consider --pad-dim1\n",
                cfg.n + 2 + cfg.pad_dim1);
  if (rec.time_best_s)
    std::printf("  time: best %.6g s, median %.6g s\n", *rec.time_best_s, *rec.time_median_s);
  if (rec.gbs_reported) std::printf("  bandwidth reported: %.4g GB/s\n", *rec.gbs_reported);
  if (rec.gbs_actual) std::printf("  bandwidth actual (with RFO): %.4g GB/s\n", *rec.gbs_actual);
  if (rec.mlups) std::printf("  rate: %.4g MLUPs/s\n", *rec.mlups);
  if (rec.balance)
    std::printf("  balance: %.6g (mean %.6g of %u controllers)\n", rec.balance->normalized(),
                rec.balance->mean_distinct_controllers_per_step(), rec.balance->controller_count);
}

void write_single(const memlane::BenchRecord& rec, const std::string& csv) {
  if (csv.empty()) return;
  memlane::SweepSeries series;
  series.records.push_back(rec);
  memlane::emit_csv(series, csv);
  std::printf("  csv: %s\n", csv.c_str());
}

std::vector<std::size_t> sweep_values(const std::vector<std::size_t>& values, std::size_t from,
                                      std::size_t to, std::size_t step) {
  if (!values.empty()) return values;
  if (step == 0 || to < from) throw CLI::ValidationError("sweep", "need --values or --from/--to/--step");
  std::vector<std::size_t> out;
  for (std::size_t v = from; v <= to; v += step) out.push_back(v);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"memlane: layout-aware bandwidth kernels and controller aliasing analysis"};
  app.require_subcommand(1);

  CliOptions run_o, sweep_o, analyze_o, predict_o;

  auto* cmd_run = app.add_subcommand("run", "measure one configuration");
  add_common(cmd_run, run_o);

  auto* cmd_sweep = app.add_subcommand("sweep", "run a series over offset/length/threads");
  add_common(cmd_sweep, sweep_o);
  std::string sweep_var = "offset", sweep_mode = "measure";
  std::vector<std::size_t> values;
  std::size_t from = 0, to = 0, step = 0;
  cmd_sweep->add_option("--var", sweep_var, "offset|length|threads");
  cmd_sweep->add_option("--mode", sweep_mode, "measure|analyze");
  cmd_sweep->add_option("--values", values, "explicit value list")->delimiter(',');
  cmd_sweep->add_option("--from", from, "range start");
  cmd_sweep->add_option("--to", to, "range end, inclusive");
  cmd_sweep->add_option("--step", step, "range step");
  bool report_period = false;
  cmd_sweep->add_flag("--period", report_period, "detect the series period (analyze offsets)");

  auto* cmd_analyze = app.add_subcommand("analyze", "score controller balance for one config");
  add_common(cmd_analyze, analyze_o);

  auto* cmd_predict = app.add_subcommand("predict", "performance from a bandwidth figure");
  add_common(cmd_predict, predict_o);

  auto* cmd_check = app.add_subcommand("check", "verify a named layout recipe");
  std::string recipe;
  cmd_check
      ->add_option("recipe", recipe,
                   "jacobi-512-128 | triad-offsets-128-256-384 | stream-offset-0-worstcase")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_run->parsed()) {
      auto cfg = finalize(cmd_run, run_o);
      cfg.mode = memlane::BenchMode::Measure;
      std::puts("note: threads are not pinned; use OS facilities (taskset, numactl) for stable numbers");
      auto rec = memlane::run(cfg);
      print_record(rec);
      write_single(rec, run_o.csv);
    } else if (cmd_analyze->parsed()) {
      auto cfg = finalize(cmd_analyze, analyze_o);
      cfg.mode = memlane::BenchMode::Analyze;
      auto rec = memlane::run(cfg);
      print_record(rec);
      write_single(rec, analyze_o.csv);
    } else if (cmd_predict->parsed()) {
      auto cfg = finalize(cmd_predict, predict_o);
      cfg.mode = memlane::BenchMode::Predict;
      auto rec = memlane::run(cfg);
      print_record(rec);
      write_single(rec, predict_o.csv);
    } else if (cmd_sweep->parsed()) {
      auto cfg = finalize(cmd_sweep, sweep_o);
      cfg.mode = memlane::parse_mode(sweep_mode) == memlane::BenchMode::Analyze
                     ? memlane::BenchMode::Analyze
                     : memlane::BenchMode::Measure;
      if (cfg.mode == memlane::BenchMode::Measure)
        std::puts("note: threads are not pinned; use OS facilities (taskset, numactl) for stable numbers");
      auto var = memlane::parse_sweep_variable(sweep_var);
      auto vals = sweep_values(values, from, to, step);
      auto series = memlane::sweep(cfg, var, vals, sweep_o.csv);
      std::printf("%zu points over %s\n", series.records.size(), series.variable.c_str());
      for (std::size_t i = 0; i < series.records.size(); ++i) {
        const auto& rec = series.records[i];
        std::printf("  %s=%zu", series.variable.c_str(), series.values[i]);
        if (rec.balance) std::printf(" balance=%.6g", rec.balance->normalized());
        if (rec.gbs_reported) std::printf(" gbs=%.4g", *rec.gbs_reported);
        if (rec.mlups) std::printf(" mlups=%.4g", *rec.mlups);
        if (memlane::thrashing_candidate(rec.config)) std::printf(" [thrashing candidate]");
        std::printf("\n");
      }
      if (report_period) {
        if (var != memlane::SweepVariable::Offset || cfg.mode != memlane::BenchMode::Analyze)
          throw std::invalid_argument("--period needs an analyze-mode offset sweep");
        memlane::ScoreSweep scores;
        scores.offsets = series.values;
        for (const auto& rec : series.records) scores.scores.push_back(*rec.balance);
        auto period = memlane::detect_period(scores);
        if (period)
          std::printf("period: %zu bytes\n", *period);
        else
          std::puts("period: none within the sampled window");
      }
      if (!sweep_o.csv.empty()) std::printf("csv: %s\n", sweep_o.csv.c_str());
    } else if (cmd_check->parsed()) {
      auto report = memlane::recipe_check(recipe);
      std::printf("%s: %s\n", report.name.c_str(), report.pass ? "PASS" : "FAIL");
      for (const auto& line : report.details) std::printf("  %s\n", line.c_str());
      return report.pass ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
