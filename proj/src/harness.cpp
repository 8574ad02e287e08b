#include "memlane/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace memlane {

const char* to_string(BenchMode mode) {
  switch (mode) {
    case BenchMode::Measure: return "measure";
    case BenchMode::Analyze: return "analyze";
    case BenchMode::Predict: return "predict";
  }
  return "?";
}

const char* to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::Copy: return "copy";
    case KernelKind::Scale: return "scale";
    case KernelKind::Add: return "add";
    case KernelKind::Triad: return "triad";
    case KernelKind::VTriad: return "vtriad";
    case KernelKind::Jacobi2D: return "jacobi2d";
    case KernelKind::Lbm: return "lbm";
  }
  return "?";
}

KernelKind parse_kernel(const std::string& name) {
  if (name == "copy") return KernelKind::Copy;
  if (name == "scale") return KernelKind::Scale;
  if (name == "add") return KernelKind::Add;
  if (name == "triad") return KernelKind::Triad;
  if (name == "vtriad") return KernelKind::VTriad;
  if (name == "jacobi2d") return KernelKind::Jacobi2D;
  if (name == "lbm") return KernelKind::Lbm;
  throw std::invalid_argument("unknown kernel '" + name + "'");
}

BenchMode parse_mode(const std::string& name) {
  if (name == "measure") return BenchMode::Measure;
  if (name == "analyze") return BenchMode::Analyze;
  if (name == "predict") return BenchMode::Predict;
  throw std::invalid_argument("unknown mode '" + name + "'");
}

SweepVariable parse_sweep_variable(const std::string& name) {
  if (name == "offset") return SweepVariable::Offset;
  if (name == "length") return SweepVariable::Length;
  if (name == "threads") return SweepVariable::Threads;
  throw std::invalid_argument("unknown sweep variable '" + name + "'");
}

namespace {

bool is_stream(KernelKind k) {
  return k == KernelKind::Copy || k == KernelKind::Scale || k == KernelKind::Add ||
         k == KernelKind::Triad || k == KernelKind::VTriad;
}

StreamKernel to_stream_kernel(KernelKind k) {
  switch (k) {
    case KernelKind::Copy: return StreamKernel::Copy;
    case KernelKind::Scale: return StreamKernel::Scale;
    case KernelKind::Add: return StreamKernel::Add;
    case KernelKind::Triad: return StreamKernel::Triad;
    default: return StreamKernel::VectorTriad;
  }
}

KernelDescriptor descriptor_for(const BenchConfig& cfg) {
  const KernelKind kind = cfg.kind();
  if (is_stream(kind)) return stream_descriptor(to_stream_kernel(kind), cfg.n);
  if (kind == KernelKind::Jacobi2D) return jacobi_descriptor(cfg.n);
  return lbm_descriptor(cfg.n, cfg.lbm_layout, cfg.lbm_element_size, cfg.pad_dim1, cfg.coalesce);
}

std::string format_number(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("csv: number formatting failed");
  return {buf, p};
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string{};
}

}  // namespace

std::size_t BenchConfig::array_count() const {
  switch (kind()) {
    case KernelKind::VTriad: return 4;
    case KernelKind::Jacobi2D: return 2;
    case KernelKind::Lbm: return 1;
    default: return 3;
  }
}

std::size_t BenchConfig::offset_for(std::size_t array_index) const {
  return array_index < offsets.size() ? offsets[array_index] : 0;
}

std::size_t BenchConfig::effective_segments() const {
  if (segments != 0) return segments;
  return (seg_align > 0 || shift > 0) ? threads : 1;
}

void BenchConfig::validate() const {
  const KernelKind k = kind();  // throws on bad name
  if (threads == 0) throw std::invalid_argument("config: threads must be >= 1");
  if (n == 0) throw std::invalid_argument("config: n must be >= 1");
  if (mode == BenchMode::Measure && reps < 3)
    throw std::invalid_argument("config: measure mode needs reps >= 3");
  if (mode == BenchMode::Predict && !(bandwidth > 0))
    throw std::invalid_argument("config: predict mode needs a positive --bandwidth");
  if (k == KernelKind::Jacobi2D && n < 3)
    throw std::invalid_argument("config: jacobi2d needs n >= 3");
  if (k == KernelKind::Lbm && lbm_element_size != 8 && lbm_element_size != 4)
    throw std::invalid_argument("config: lbm element size must be 4 or 8");
  if (common_block && (!is_stream(k) || mode == BenchMode::Measure))
    throw std::invalid_argument("config: --common applies to stream kernels in analyze mode");
  if (common_block && offsets.size() > 1)
    throw std::invalid_argument("config: --common takes a single offset (the per-array padding)");
  if (offsets.size() > array_count())
    throw std::invalid_argument("config: more offsets than kernel arrays");
  const std::size_t elem = k == KernelKind::Lbm ? lbm_element_size : 8;
  for (std::size_t off : offsets)
    if (off % elem != 0)
      throw std::invalid_argument("config: offsets must be multiples of the element size");
  model.validate();
}

std::optional<double> BenchRecord::balance_score() const {
  if (!balance) return std::nullopt;
  return balance->normalized();
}

BoundKernel bind_for_analysis(const BenchConfig& cfg) {
  cfg.validate();
  BoundKernel bound;
  bound.descriptor = descriptor_for(cfg);
  const KernelKind kind = cfg.kind();

  if (kind == KernelKind::Lbm) {
    LatticeSpace sp{cfg.n, cfg.pad_dim1, cfg.lbm_layout, cfg.coalesce};
    bound.arrays.push_back(
        ArrayLayout{0, flat_layout(sp.values_per_grid() * 2, cfg.lbm_element_size)});
    return bound;
  }

  if (cfg.common_block) {
    // STREAM COMMON emulation: arrays sit back to back in one block, each
    // padded by the configured offset, block base ideally aligned.
    const std::size_t pad = cfg.offset_for(0);
    const std::size_t span = cfg.n * 8 + pad;
    for (std::size_t k = 0; k < cfg.array_count(); ++k)
      bound.arrays.push_back(ArrayLayout{static_cast<std::uintptr_t>(k * span), flat_layout(cfg.n)});
    return bound;
  }

  // Separate ideal allocations: bases are consecutive multiples of a stride
  // that satisfies every alignment in play, so base residues are zero and
  // only the configured offsets/shifts move addresses.
  std::vector<LayoutPlan> plans;
  if (kind == KernelKind::Jacobi2D) {
    std::vector<std::size_t> rows(cfg.n, cfg.n);
    for (std::size_t k = 0; k < 2; ++k) {
      LayoutParams p{8, cfg.base_align, cfg.seg_align, cfg.shift, cfg.offset_for(k)};
      plans.push_back(build_layout(p, rows));
    }
  } else {
    auto lengths = partition(cfg.n, cfg.effective_segments());
    for (std::size_t k = 0; k < cfg.array_count(); ++k) {
      LayoutParams p{8, cfg.base_align, cfg.seg_align, cfg.shift, cfg.offset_for(k)};
      plans.push_back(build_layout(p, lengths));
    }
  }
  std::size_t max_span = 0;
  for (const auto& p : plans) max_span = std::max(max_span, p.total_bytes);
  const std::size_t stride =
      align_up(max_span, std::max({cfg.base_align, cfg.seg_align, std::size_t{4096}}));
  for (std::size_t k = 0; k < plans.size(); ++k)
    bound.arrays.push_back(ArrayLayout{static_cast<std::uintptr_t>(k * stride), std::move(plans[k])});
  return bound;
}

namespace {

BenchRecord run_analyze(const BenchConfig& cfg) {
  BenchRecord rec;
  rec.config = cfg;
  BoundKernel bound = bind_for_analysis(cfg);
  AccessTrace trace = trace_kernel(cfg.model, bound, cfg.threads, cfg.schedule, cfg.trace_steps);
  rec.balance = balance(cfg.model, trace);
  return rec;
}

BenchRecord run_predict(const BenchConfig& cfg) {
  BenchRecord rec;
  rec.config = cfg;
  PredictedRate rate = predicted_performance(descriptor_for(cfg), cfg.bandwidth);
  if (rate.unit == RateUnit::GBytesPerSec) {
    rec.gbs_reported = rate.value;
    rec.gbs_actual = cfg.bandwidth / 1e9;
  } else {
    rec.mlups = rate.value;
  }
  return rec;
}

BenchRecord run_measure(const BenchConfig& cfg, const RunHooks& hooks) {
  BenchRecord rec;
  rec.config = cfg;
  const KernelKind kind = cfg.kind();
  const LayoutParams common{8, cfg.base_align, cfg.seg_align, cfg.shift, 0};

  std::function<double()> sweep_once;

  std::vector<SegmentedArray> arrays;
  Jacobi2DGrid grid;
  std::optional<LbmLattice> lattice;

  if (is_stream(kind)) {
    const std::size_t count = cfg.array_count();
    const std::size_t segments = cfg.effective_segments();
    for (std::size_t k = 0; k < count; ++k) {
      LayoutParams p = common;
      p.offset = cfg.offset_for(k);
      arrays.push_back(SegmentedArray::create(cfg.n, segments, p));
    }
    arrays[0].fill(0.0);           // A
    arrays[1].fill(2.0);           // B
    arrays[2].fill(1.0);           // C
    if (count > 3) arrays[3].fill(0.5);  // D
    const double s = cfg.scalar;
    sweep_once = [&, s, kind]() {
      switch (kind) {
        case KernelKind::Copy: return stream_copy(arrays[0], arrays[2], cfg.threads, cfg.schedule);
        case KernelKind::Scale:
          return stream_scale(arrays[1], arrays[2], s, cfg.threads, cfg.schedule);
        case KernelKind::Add:
          return stream_add(arrays[0], arrays[1], arrays[2], cfg.threads, cfg.schedule);
        case KernelKind::Triad:
          return stream_triad(arrays[0], arrays[1], arrays[2], s, cfg.threads, cfg.schedule);
        default:
          return vector_triad(arrays[0], arrays[1], arrays[2], arrays[3], cfg.threads,
                              cfg.schedule);
      }
    };
  } else if (kind == KernelKind::Jacobi2D) {
    LayoutParams src_p = common, dst_p = common;
    src_p.offset = cfg.offset_for(0);
    dst_p.offset = cfg.offset_for(1);
    grid = Jacobi2DGrid::create(cfg.n, src_p, dst_p);
    for (std::size_t r = 0; r < cfg.n; ++r) {
      auto row = grid.source.segment(r);
      for (std::size_t j = 0; j < row.size(); ++j)
        row[j] = static_cast<double>(r + j);
    }
    sweep_once = [&]() { return jacobi_sweep(grid, cfg.threads, cfg.schedule); };
  } else {
    LbmParams p;
    p.n = cfg.n;
    p.layout = cfg.lbm_layout;
    p.element_size = cfg.lbm_element_size;
    p.pad_dim1 = cfg.pad_dim1;
    lattice.emplace(p);
    sweep_once = [&]() { return lattice->step(cfg.threads, cfg.schedule, cfg.coalesce); };
  }

  auto timed = [&](unsigned index) {
    double seconds = sweep_once();
    if (hooks.sweep_time_penalty) seconds += hooks.sweep_time_penalty(index);
    return seconds;
  };

  timed(0);  // warm-up, excluded from statistics
  std::vector<double> times;
  times.reserve(cfg.reps);
  for (unsigned r = 1; r <= cfg.reps; ++r) times.push_back(timed(r));
  std::sort(times.begin(), times.end());
  const double best = times.front();
  const double median = times.size() % 2 == 1
                            ? times[times.size() / 2]
                            : 0.5 * (times[times.size() / 2 - 1] + times[times.size() / 2]);
  rec.time_best_s = best;
  rec.time_median_s = median;

  const KernelDescriptor desc = descriptor_for(cfg);
  const TrafficModel m = traffic_model(desc);
  const double iters = static_cast<double>(desc.iteration_count());
  if (is_stream(kind)) {
    rec.gbs_reported = m.bytes_memory * iters / best / 1e9;
    rec.gbs_actual = m.bytes_memory_rfo * iters / best / 1e9;
  } else {
    rec.mlups = iters / best / 1e6;
  }
  return rec;
}

}  // namespace

BenchRecord run(const BenchConfig& config, const RunHooks& hooks) {
  config.validate();
  switch (config.mode) {
    case BenchMode::Analyze: return run_analyze(config);
    case BenchMode::Predict: return run_predict(config);
    case BenchMode::Measure: return run_measure(config, hooks);
  }
  throw std::logic_error("run: bad mode");
}

SweepSeries sweep(const BenchConfig& config, SweepVariable variable,
                  const std::vector<std::size_t>& values, const std::string& csv_path,
                  const RunHooks& hooks) {
  config.validate();
  if (values.empty()) throw std::invalid_argument("sweep: empty value list");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] <= values[i - 1])
      throw std::invalid_argument("sweep: values must be strictly increasing");
  if (variable == SweepVariable::Offset && config.kind() == KernelKind::Lbm)
    throw std::invalid_argument("sweep: offset does not apply to lbm (use --pad-dim1)");

  SweepSeries series;
  series.values = values;
  switch (variable) {
    case SweepVariable::Offset: series.variable = "offset"; break;
    case SweepVariable::Length: series.variable = "length"; break;
    case SweepVariable::Threads: series.variable = "threads"; break;
  }

  for (std::size_t value : values) {
    BenchConfig point = config;
    switch (variable) {
      case SweepVariable::Offset:
        if (config.common_block) {
          point.offsets = {value};
        } else {
          point.offsets.clear();
          for (std::size_t k = 0; k < config.array_count(); ++k)
            point.offsets.push_back(k * value);
        }
        break;
      case SweepVariable::Length: point.n = value; break;
      case SweepVariable::Threads:
        point.threads = static_cast<unsigned>(value);
        break;
    }
    series.records.push_back(run(point, hooks));
  }
  if (!csv_path.empty()) emit_csv(series, csv_path);
  return series;
}

std::string to_csv(const SweepSeries& series) {
  std::ostringstream out;
  out << "variable,value,kernel,N,threads,schedule,offset,seg_align,shift,"
         "time_best_s,time_median_s,gbs_reported,gbs_actual,mlups,balance_score\n";
  for (std::size_t i = 0; i < series.records.size(); ++i) {
    const BenchRecord& rec = series.records[i];
    const BenchConfig& cfg = rec.config;
    out << series.variable << ',';
    if (i < series.values.size()) out << series.values[i];
    out << ',' << cfg.kernel << ',' << cfg.n << ',' << cfg.threads << ','
        << cfg.schedule.to_string() << ',';
    for (std::size_t k = 0; k < cfg.offsets.size(); ++k) {
      if (k) out << ';';
      out << cfg.offsets[k];
    }
    out << ',' << cfg.seg_align << ',' << cfg.shift << ',' << format_optional(rec.time_best_s)
        << ',' << format_optional(rec.time_median_s) << ',' << format_optional(rec.gbs_reported)
        << ',' << format_optional(rec.gbs_actual) << ',' << format_optional(rec.mlups) << ','
        << format_optional(rec.balance_score()) << '\n';
  }
  return out.str();
}

void emit_csv(const SweepSeries& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_csv: cannot open '" + path + "'");
  out << to_csv(series);
  if (!out.flush()) throw std::runtime_error("emit_csv: write failed for '" + path + "'");
}

ScoreSweep analysis_score_sweep(const BenchConfig& config,
                                const std::vector<std::size_t>& offsets) {
  BenchConfig base = config;
  base.mode = BenchMode::Analyze;
  base.validate();
  OffsetBinder binder = [&base](std::size_t offset) {
    BenchConfig point = base;
    if (base.common_block) {
      point.offsets = {offset};
    } else {
      point.offsets.clear();
      for (std::size_t k = 0; k < base.array_count(); ++k) point.offsets.push_back(k * offset);
    }
    return bind_for_analysis(point);
  };
  return sweep_offset(base.model, binder, offsets, base.threads, base.schedule, base.trace_steps);
}

bool thrashing_candidate(const BenchConfig& config) {
  if (config.kind() != KernelKind::Lbm) return false;
  return (config.n + 2 + config.pad_dim1) % 64 == 0;
}

RecipeReport recipe_check(const std::string& name) {
  RecipeReport report;
  report.name = name;

  if (name == "jacobi-512-128") {
    LayoutParams params{8, 8192, 512, 128, 0};
    const std::size_t rows = 64, cols = 512;
    ArrayLayout rows_layout{0, build_layout(params, std::vector<std::size_t>(rows, cols))};
    AddressMapModel model;
    report.pass = true;
    for (std::size_t k = 0; k < rows; ++k) {
      unsigned ctl = model.controller_of(rows_layout.segment_address(k));
      if (ctl != k % 4) {
        report.pass = false;
        report.details.push_back("row " + std::to_string(k) + " at byte " +
                                 std::to_string(rows_layout.segment_address(k)) +
                                 " maps to controller " + std::to_string(ctl) + ", expected " +
                                 std::to_string(k % 4));
      }
    }
    if (report.pass) report.details.push_back("row base controllers cycle 0,1,2,3");
    return report;
  }

  auto scored = [&report](BenchConfig cfg, std::uint64_t num, std::uint64_t den,
                          const char* claim) {
    BenchRecord rec = run(cfg);
    const BalanceScore& b = *rec.balance;
    // normalized score == num/den, exactly
    report.pass = static_cast<unsigned __int128>(b.distinct_sum) * den ==
                  static_cast<unsigned __int128>(num) * b.group_count *
                      b.controller_count;
    std::ostringstream line;
    line << claim << ": score " << b.distinct_sum << '/'
         << (b.group_count * b.controller_count) << " = " << b.normalized();
    report.details.push_back(line.str());
  };

  if (name == "triad-offsets-128-256-384") {
    BenchConfig cfg;
    cfg.kernel = "vtriad";
    cfg.mode = BenchMode::Analyze;
    cfg.n = std::size_t{1} << 20;
    cfg.threads = 4;
    cfg.offsets = {0, 128, 256, 384};
    scored(cfg, 1, 1, "vector triad at offsets 0/128/256/384 hits all controllers");
    return report;
  }

  if (name == "stream-offset-0-worstcase") {
    BenchConfig cfg;
    cfg.kernel = "triad";
    cfg.mode = BenchMode::Analyze;
    cfg.n = std::size_t{1} << 25;
    cfg.threads = 8;
    cfg.common_block = true;
    cfg.offsets = {0};
    scored(cfg, 1, 4, "packed STREAM triad at offset 0 serializes on one controller");
    return report;
  }

  throw std::invalid_argument("unknown recipe '" + name + "'");
}

}  // namespace memlane
