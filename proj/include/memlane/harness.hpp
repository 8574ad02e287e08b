#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "memlane/address_map.hpp"
#include "memlane/descriptor.hpp"
#include "memlane/kernels.hpp"
#include "memlane/lbm.hpp"
#include "memlane/schedule.hpp"
#include "memlane/trace.hpp"

namespace memlane {

enum class BenchMode : std::uint8_t { Measure, Analyze, Predict };

enum class KernelKind : std::uint8_t { Copy, Scale, Add, Triad, VTriad, Jacobi2D, Lbm };

const char* to_string(BenchMode mode);
const char* to_string(KernelKind kind);
KernelKind parse_kernel(const std::string& name);
BenchMode parse_mode(const std::string& name);

struct BenchConfig {
  std::string kernel = "triad";
  std::size_t n = std::size_t{1} << 20;  // elements, or grid edge for jacobi2d/lbm
  unsigned threads = 1;
  Schedule schedule{};
  BenchMode mode = BenchMode::Measure;

  // Array placement (stream kernels and jacobi2d rows).
  std::size_t base_align = 8192;
  std::size_t seg_align = 0;
  std::size_t shift = 0;
  std::vector<std::size_t> offsets;  // bytes, one per array; missing entries are 0
  std::size_t segments = 0;          // 0 = threads when seg_align/shift in use, else 1
  bool common_block = false;         // STREAM COMMON emulation (analyze mode only)

  // lbm
  LbmDataLayout lbm_layout = LbmDataLayout::IJKv;
  std::size_t pad_dim1 = 0;
  bool coalesce = false;
  std::size_t lbm_element_size = 8;

  unsigned reps = 3;
  double scalar = 3.0;       // s in scale/triad
  double bandwidth = 0;      // bytes/s, predict mode
  AddressMapModel model{};
  std::size_t trace_steps = 256;  // analyze mode step limit

  KernelKind kind() const { return parse_kernel(kernel); }
  std::size_t array_count() const;
  std::size_t offset_for(std::size_t array_index) const;
  std::size_t effective_segments() const;
  void validate() const;
};

struct BenchRecord {
  BenchConfig config;
  std::optional<double> time_best_s;
  std::optional<double> time_median_s;
  std::optional<double> gbs_reported;  // STREAM reporting convention, RFO not counted
  std::optional<double> gbs_actual;    // transfer volume including RFO
  std::optional<double> mlups;
  std::optional<BalanceScore> balance;

  std::optional<double> balance_score() const;  // normalized, analyze mode
};

struct SweepSeries {
  std::string variable;  // "offset" | "length" | "threads" | ""
  std::vector<std::size_t> values;
  std::vector<BenchRecord> records;
};

/// Test instrumentation: adds artificial seconds to a sweep's recorded time.
/// Sweep 0 is the untimed warm-up.
struct RunHooks {
  std::function<double(unsigned sweep_index)> sweep_time_penalty;
};

/// Execute one configuration: measure (warm-up + reps timed sweeps),
/// analyze (trace + balance on virtual layouts), or predict (traffic model
/// against --bandwidth).
BenchRecord run(const BenchConfig& config, const RunHooks& hooks = {});

enum class SweepVariable : std::uint8_t { Offset, Length, Threads };
SweepVariable parse_sweep_variable(const std::string& name);

/// One record per value; values must be strictly increasing. For offset
/// sweeps, array k is shifted by k*value bytes (COMMON emulation shifts via
/// the shared block instead). Writes CSV when csv_path is given.
SweepSeries sweep(const BenchConfig& config, SweepVariable variable,
                  const std::vector<std::size_t>& values, const std::string& csv_path = {},
                  const RunHooks& hooks = {});

void emit_csv(const SweepSeries& series, const std::string& path);
std::string to_csv(const SweepSeries& series);

/// Virtual (address-only) layout binding used by analyze mode: array bases
/// are ideally aligned, deterministic, and never dereferenced.
BoundKernel bind_for_analysis(const BenchConfig& config);

/// Balance scores over an offset sweep of `config` (analyze semantics).
ScoreSweep analysis_score_sweep(const BenchConfig& config, const std::vector<std::size_t>& offsets);

/// True when the lattice's first (unit-stride) dimension, n + 2 halo cells
/// + pad, is a multiple of 64 elements: the classic cache-thrashing
/// geometry. Counter it with pad_dim1.
bool thrashing_candidate(const BenchConfig& config);

struct RecipeReport {
  std::string name;
  bool pass = false;
  std::vector<std::string> details;  // offending addresses / scores on failure
};

/// Named layout recipes with their qualitative claims:
///   jacobi-512-128            row base controllers cycle 0,1,2,3
///   triad-offsets-128-256-384 vector triad balance score exactly 1
///   stream-offset-0-worstcase packed STREAM triad balance score exactly 1/4
RecipeReport recipe_check(const std::string& name);

}  // namespace memlane
