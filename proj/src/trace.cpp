#include "memlane/trace.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>

namespace memlane {

std::size_t AccessTrace::total_records() const {
  std::size_t n = 0;
  for (const auto& step : steps) n += step.size();
  return n;
}

double BalanceScore::mean_distinct_controllers_per_step() const {
  if (group_count == 0) return 0.0;
  return static_cast<double>(distinct_sum) / static_cast<double>(group_count);
}

double BalanceScore::normalized() const {
  if (controller_count == 0) return 0.0;
  return mean_distinct_controllers_per_step() / controller_count;
}

double BalanceScore::histogram_evenness() const {
  if (histogram.empty()) return 1.0;
  std::uint64_t lo = histogram[0], hi = histogram[0];
  for (std::uint64_t c : histogram) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  if (lo == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(hi) / static_cast<double>(lo);
}

bool BalanceScore::same_mean(const BalanceScore& other) const {
  // distinct_sum/group_count == other.distinct_sum/other.group_count, exactly.
  return static_cast<unsigned __int128>(distinct_sum) * other.group_count ==
         static_cast<unsigned __int128>(other.distinct_sum) * group_count;
}

namespace {

struct Iteration {
  std::size_t i = 0;  // element (1D), row (2D), z (3D)
  std::size_t j = 0;  // col (2D), y (3D)
  std::size_t k = 0;  // x (3D)
};

// Walks one worker's share of the loop nest in execution order: outer
// parallel indices from the schedule, inner indices serial.
class WorkerCursor {
 public:
  WorkerCursor(const IterationSpace& space, std::size_t parallel_extent, unsigned threads,
               unsigned tid, const Schedule& schedule)
      : space_(&space), ranges_(ranges_for(parallel_extent, threads, tid, schedule)) {
    if (!ranges_.empty()) outer_ = ranges_[0].begin;
  }

  bool done() const { return range_ >= ranges_.size(); }

  Iteration current() const {
    Iteration it;
    if (std::holds_alternative<RowGridSpace>(*space_)) {
      it.i = outer_ + 1;  // interior row
      it.j = inner_ + 1;  // interior col
    } else if (const auto* lat = std::get_if<LatticeSpace>(&*space_)) {
      if (lat->coalesce_zy) {
        it.i = 1 + outer_ / lat->n;  // z
        it.j = 1 + outer_ % lat->n;  // y
        it.k = 1 + inner_;           // x
      } else {
        it.i = 1 + outer_;              // z
        it.j = 1 + inner_ / lat->n;     // y
        it.k = 1 + inner_ % lat->n;     // x
      }
    } else {
      it.i = outer_;
    }
    return it;
  }

  void advance() {
    if (++inner_ < inner_extent()) return;
    inner_ = 0;
    if (++outer_ < ranges_[range_].end) return;
    if (++range_ < ranges_.size()) outer_ = ranges_[range_].begin;
  }

 private:
  std::size_t inner_extent() const {
    if (const auto* grid = std::get_if<RowGridSpace>(&*space_)) return grid->n - 2;
    if (const auto* lat = std::get_if<LatticeSpace>(&*space_))
      return lat->coalesce_zy ? lat->n : lat->n * lat->n;
    return 1;
  }

  const IterationSpace* space_;
  std::vector<IndexRange> ranges_;
  std::size_t range_ = 0;
  std::size_t outer_ = 0;
  std::size_t inner_ = 0;
};

std::size_t parallel_extent(const IterationSpace& space) {
  if (const auto* lin = std::get_if<LinearSpace>(&space)) return lin->n;
  if (const auto* grid = std::get_if<RowGridSpace>(&space)) {
    if (grid->n < 3) throw std::invalid_argument("trace: grid too small (n < 3)");
    return grid->n - 2;
  }
  const auto& lat = std::get<LatticeSpace>(space);
  if (lat.n == 0) throw std::invalid_argument("trace: empty lattice");
  return lat.coalesce_zy ? lat.n * lat.n : lat.n;
}

void check_binding(const BoundKernel& bound) {
  const auto& d = bound.descriptor;
  if (d.streams.empty()) throw std::invalid_argument("trace: descriptor has no streams");
  for (const auto& s : d.streams) {
    if (s.array_index >= bound.arrays.size())
      throw std::invalid_argument("trace: stream '" + s.role + "' references missing layout " +
                                  std::to_string(s.array_index));
    const LayoutPlan& plan = bound.arrays[s.array_index].plan;
    if (const auto* lin = std::get_if<LinearSpace>(&d.space)) {
      std::size_t need = lin->n == 0 ? 0 : (lin->n - 1) * std::get<LinearAt>(s.at).stride + 1;
      if (plan.logical_length() < need)
        throw std::invalid_argument("trace: layout too short for stream '" + s.role + "'");
    } else if (const auto* grid = std::get_if<RowGridSpace>(&d.space)) {
      if (plan.segment_count() < grid->n)
        throw std::invalid_argument("trace: stencil needs one segment per row");
    }
  }
}

}  // namespace

AccessTrace trace_kernel(const AddressMapModel& model, const BoundKernel& bound, unsigned threads,
                         const Schedule& schedule, std::size_t step_limit) {
  model.validate();
  if (threads == 0) throw std::invalid_argument("trace: threads must be >= 1");
  check_binding(bound);

  const auto& d = bound.descriptor;
  const std::size_t extent = parallel_extent(d.space);

  std::vector<std::vector<std::size_t>> prefixes;  // per array, for 1D lookup
  if (std::holds_alternative<LinearSpace>(d.space)) {
    prefixes.reserve(bound.arrays.size());
    for (const auto& a : bound.arrays) prefixes.push_back(length_prefix(a.plan));
  }

  std::vector<WorkerCursor> cursors;
  cursors.reserve(threads);
  for (unsigned tid = 0; tid < threads; ++tid)
    cursors.emplace_back(d.space, extent, threads, tid, schedule);

  AccessTrace trace;
  trace.thread_count = threads;
  trace.streams_per_thread = d.streams.size();

  const auto* lat = std::get_if<LatticeSpace>(&d.space);

  for (std::size_t step = 0; step_limit == 0 || step < step_limit; ++step) {
    std::vector<AccessRecord> records;
    for (unsigned tid = 0; tid < threads; ++tid) {
      if (cursors[tid].done()) continue;
      const Iteration it = cursors[tid].current();
      for (std::uint32_t si = 0; si < d.streams.size(); ++si) {
        const StreamSpec& s = d.streams[si];
        const ArrayLayout& arr = bound.arrays[s.array_index];
        std::uintptr_t addr = 0;
        if (const auto* lin = std::get_if<LinearAt>(&s.at)) {
          auto [seg, local] = locate(prefixes[s.array_index], it.i * lin->stride);
          addr = arr.element_address(seg, local);
        } else if (const auto* st = std::get_if<StencilAt>(&s.at)) {
          std::size_t row = it.i + st->drow;
          std::size_t col = it.j + st->dcol;
          addr = arr.base + arr.plan.segment_byte_offsets[row] + col * arr.plan.element_size;
        } else {
          const auto& la = std::get<LatticeAt>(s.at);
          std::size_t flat = lat->flat_index(it.k + la.dx, it.j + la.dy, it.i + la.dz,
                                             la.velocity, la.grid);
          addr = arr.base + flat * d.element_size;
        }
        records.push_back({tid, si, model.line_of(addr), s.direction});
      }
      cursors[tid].advance();
    }
    if (records.empty()) break;
    trace.steps.push_back(std::move(records));
  }
  return trace;
}

BalanceScore balance(const AddressMapModel& model, const AccessTrace& trace) {
  model.validate();
  if (trace.steps.empty()) throw std::invalid_argument("balance: empty trace");
  if (model.controller_count() > 64)
    throw std::invalid_argument("balance: more than 64 controllers unsupported");

  BalanceScore score;
  score.controller_count = model.controller_count();
  score.histogram.assign(score.controller_count, 0);

  // (thread, controller-mask) pairs of the current step; records are not
  // required to arrive grouped by thread.
  std::vector<std::pair<std::uint32_t, std::uint64_t>> groups;
  for (const auto& step : trace.steps) {
    groups.clear();
    for (const AccessRecord& rec : step) {
      unsigned ctl = model.controller_of(rec.line);
      ++score.histogram[ctl];
      auto it = std::find_if(groups.begin(), groups.end(),
                             [&](const auto& g) { return g.first == rec.thread; });
      if (it == groups.end())
        groups.emplace_back(rec.thread, std::uint64_t{1} << ctl);
      else
        it->second |= std::uint64_t{1} << ctl;
    }
    for (const auto& [tid, mask] : groups)
      score.distinct_sum += static_cast<std::uint64_t>(std::popcount(mask));
    score.group_count += groups.size();
  }
  return score;
}

ScoreSweep sweep_offset(const AddressMapModel& model, const OffsetBinder& bind,
                        std::span<const std::size_t> offsets, unsigned threads,
                        const Schedule& schedule, std::size_t step_limit) {
  if (!bind) throw std::invalid_argument("sweep_offset: missing binder");
  ScoreSweep sweep;
  sweep.offsets.assign(offsets.begin(), offsets.end());
  sweep.scores.reserve(offsets.size());
  std::size_t trace_len = 0;
  for (std::size_t offset : offsets) {
    BoundKernel bound = bind(offset);
    AccessTrace trace = trace_kernel(model, bound, threads, schedule, step_limit);
    if (sweep.scores.empty())
      trace_len = trace.steps.size();
    else if (trace.steps.size() != trace_len)
      throw std::runtime_error("sweep_offset: trace length changed across offsets");
    sweep.scores.push_back(balance(model, trace));
  }
  return sweep;
}

std::optional<std::size_t> detect_period(const ScoreSweep& sweep) {
  const std::size_t m = sweep.scores.size();
  if (m < 2) throw std::invalid_argument("detect_period: need at least 2 samples");
  if (sweep.offsets.size() != m) throw std::invalid_argument("detect_period: malformed sweep");
  const std::size_t spacing = sweep.offsets[1] - sweep.offsets[0];
  if (spacing == 0) throw std::invalid_argument("detect_period: zero spacing");
  for (std::size_t i = 1; i + 1 < m; ++i)
    if (sweep.offsets[i + 1] - sweep.offsets[i] != spacing)
      throw std::invalid_argument("detect_period: offsets not uniformly spaced");

  for (std::size_t k = 1; k < m; ++k) {
    bool periodic = true;
    for (std::size_t i = 0; i + k < m; ++i) {
      if (!sweep.scores[i].same_mean(sweep.scores[i + k])) {
        periodic = false;
        break;
      }
    }
    if (periodic) return k * spacing;
  }
  return std::nullopt;
}

}  // namespace memlane
