#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "memlane/address_map.hpp"
#include "memlane/descriptor.hpp"
#include "memlane/layout.hpp"
#include "memlane/schedule.hpp"

namespace memlane {

struct AccessRecord {
  std::uint32_t thread = 0;
  std::uint32_t stream = 0;
  std::uintptr_t line = 0;  // cache-line address
  StreamDirection direction = StreamDirection::Read;

  friend bool operator==(const AccessRecord&, const AccessRecord&) = default;
};

/// Lockstep access trace: step s holds, for every worker still running, the
/// cache lines its streams touch on its s-th loop iteration.
struct AccessTrace {
  std::vector<std::vector<AccessRecord>> steps;
  unsigned thread_count = 0;
  std::size_t streams_per_thread = 0;

  std::size_t total_records() const;
};

/// Controller utilization summary. The mean counts, for each (step, thread)
/// group, how many distinct controllers that thread touches at that step;
/// scores are exact rationals (distinct_sum / group_count).
struct BalanceScore {
  std::uint64_t distinct_sum = 0;
  std::uint64_t group_count = 0;
  unsigned controller_count = 0;
  std::vector<std::uint64_t> histogram;  // accesses per controller

  double mean_distinct_controllers_per_step() const;
  double normalized() const;  // mean / controller_count, in (0, 1]

  /// Secondary evenness statistic: busiest controller count over least-busy
  /// count; infinity when some controller is never touched.
  double histogram_evenness() const;

  /// Exact rational equality of the mean (histograms not compared).
  bool same_mean(const BalanceScore& other) const;
};

/// A kernel descriptor bound to addressed layouts (real or virtual). For
/// lattice kernels the single bound layout is the distribution block; its
/// plan is unused beyond the base address.
struct BoundKernel {
  KernelDescriptor descriptor;
  std::vector<ArrayLayout> arrays;
};

/// Generate the lockstep trace of `bound` run by `threads` workers under
/// `schedule`, stopping after `step_limit` steps (0 = run to completion).
/// Deterministic; never touches the referenced memory.
AccessTrace trace_kernel(const AddressMapModel& model, const BoundKernel& bound, unsigned threads,
                         const Schedule& schedule, std::size_t step_limit);

BalanceScore balance(const AddressMapModel& model, const AccessTrace& trace);

/// Balance scores across a swept byte offset. Offsets must be evenly spaced
/// for detect_period.
struct ScoreSweep {
  std::vector<std::size_t> offsets;  // bytes
  std::vector<BalanceScore> scores;
};

using OffsetBinder = std::function<BoundKernel(std::size_t offset_bytes)>;

ScoreSweep sweep_offset(const AddressMapModel& model, const OffsetBinder& bind,
                        std::span<const std::size_t> offsets, unsigned threads,
                        const Schedule& schedule, std::size_t step_limit);

/// Smallest positive period, in bytes, under exact score equality over the
/// sampled window; nullopt if the series is aperiodic within the window.
std::optional<std::size_t> detect_period(const ScoreSweep& sweep);

}  // namespace memlane
