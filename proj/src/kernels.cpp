#include "memlane/kernels.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "memlane/parallel.hpp"

namespace memlane {

namespace {

std::vector<double*> segment_ptrs(SegmentedArray& a) {
  std::vector<double*> ptrs(a.segment_count());
  for (std::size_t k = 0; k < ptrs.size(); ++k) ptrs[k] = a.segment(k).data();
  return ptrs;
}

std::vector<const double*> segment_ptrs(const SegmentedArray& a) {
  std::vector<const double*> ptrs(a.segment_count());
  for (std::size_t k = 0; k < ptrs.size(); ++k) ptrs[k] = a.segment(k).data();
  return ptrs;
}

void check_same_shape(std::initializer_list<const SegmentedArray*> arrays) {
  const SegmentedArray* first = *arrays.begin();
  for (const SegmentedArray* a : arrays) {
    if (a->size() != first->size() || a->plan().segment_lengths != first->plan().segment_lengths)
      throw std::invalid_argument("stream kernel: arrays must share length and segmentation");
  }
  // Pairwise disjoint storage; passing the same array twice counts as overlap.
  const auto* begin = arrays.begin();
  for (std::size_t i = 0; i < arrays.size(); ++i) {
    for (std::size_t j = i + 1; j < arrays.size(); ++j) {
      const SegmentedArray* a = begin[i];
      const SegmentedArray* b = begin[j];
      std::uintptr_t ab = a->base_address(), ae = ab + a->plan().total_bytes;
      std::uintptr_t bb = b->base_address(), be = bb + b->plan().total_bytes;
      if (a == b || (ab < be && bb < ae))
        throw std::invalid_argument("stream kernel: arrays overlap");
    }
  }
}

// Apply op(run pointers..., length) to every contiguous run covered by the
// worker's index ranges. All arrays share the segmentation in `prefix`.
template <typename Fn>
void for_runs(std::span<const std::size_t> prefix, const IndexRange& range, Fn&& op) {
  std::size_t pos = range.begin;
  while (pos < range.end) {
    auto [seg, local] = locate(prefix, pos);
    std::size_t run = std::min(range.end - pos, prefix[seg + 1] - prefix[seg] - local);
    op(seg, local, run);
    pos += run;
  }
}

template <typename Body>
double elementwise(std::size_t n, std::span<const std::size_t> prefix, unsigned threads,
                   const Schedule& schedule, Body&& body) {
  if (threads == 0) throw std::invalid_argument("stream kernel: threads must be >= 1");
  return timed_parallel(threads, [&](unsigned tid) {
    for (const IndexRange& r : ranges_for(n, threads, tid, schedule))
      for_runs(prefix, r, body);
  });
}

}  // namespace

const char* to_string(StreamKernel k) {
  switch (k) {
    case StreamKernel::Copy: return "copy";
    case StreamKernel::Scale: return "scale";
    case StreamKernel::Add: return "add";
    case StreamKernel::Triad: return "triad";
    case StreamKernel::VectorTriad: return "vtriad";
  }
  return "?";
}

double stream_scalar_default() { return 3.0; }

double stream_copy(const SegmentedArray& a, SegmentedArray& c, unsigned threads,
                   const Schedule& schedule) {
  check_same_shape({&a, &c});
  auto ap = segment_ptrs(a);
  auto cp = segment_ptrs(c);
  auto prefix = length_prefix(a.plan());
  return elementwise(a.size(), prefix, threads, schedule,
                     [&](std::size_t seg, std::size_t local, std::size_t len) {
                       const double* s = ap[seg] + local;
                       double* d = cp[seg] + local;
                       for (std::size_t i = 0; i < len; ++i) d[i] = s[i];
                     });
}

double stream_scale(SegmentedArray& b, const SegmentedArray& c, double s, unsigned threads,
                    const Schedule& schedule) {
  check_same_shape({&b, &c});
  auto bp = segment_ptrs(b);
  auto cp = segment_ptrs(c);
  auto prefix = length_prefix(b.plan());
  return elementwise(b.size(), prefix, threads, schedule,
                     [&, s](std::size_t seg, std::size_t local, std::size_t len) {
                       double* d = bp[seg] + local;
                       const double* src = cp[seg] + local;
                       for (std::size_t i = 0; i < len; ++i) d[i] = s * src[i];
                     });
}

double stream_add(const SegmentedArray& a, const SegmentedArray& b, SegmentedArray& c,
                  unsigned threads, const Schedule& schedule) {
  check_same_shape({&a, &b, &c});
  auto ap = segment_ptrs(a);
  auto bp = segment_ptrs(b);
  auto cp = segment_ptrs(c);
  auto prefix = length_prefix(a.plan());
  return elementwise(a.size(), prefix, threads, schedule,
                     [&](std::size_t seg, std::size_t local, std::size_t len) {
                       const double* x = ap[seg] + local;
                       const double* y = bp[seg] + local;
                       double* d = cp[seg] + local;
                       for (std::size_t i = 0; i < len; ++i) d[i] = x[i] + y[i];
                     });
}

double stream_triad(SegmentedArray& a, const SegmentedArray& b, const SegmentedArray& c, double s,
                    unsigned threads, const Schedule& schedule) {
  check_same_shape({&a, &b, &c});
  auto ap = segment_ptrs(a);
  auto bp = segment_ptrs(b);
  auto cp = segment_ptrs(c);
  auto prefix = length_prefix(a.plan());
  return elementwise(a.size(), prefix, threads, schedule,
                     [&, s](std::size_t seg, std::size_t local, std::size_t len) {
                       double* d = ap[seg] + local;
                       const double* x = bp[seg] + local;
                       const double* y = cp[seg] + local;
                       for (std::size_t i = 0; i < len; ++i) d[i] = x[i] + s * y[i];
                     });
}

double vector_triad(SegmentedArray& a, const SegmentedArray& b, const SegmentedArray& c,
                    const SegmentedArray& d, unsigned threads, const Schedule& schedule) {
  check_same_shape({&a, &b, &c, &d});
  auto ap = segment_ptrs(a);
  auto bp = segment_ptrs(b);
  auto cp = segment_ptrs(c);
  auto dp = segment_ptrs(d);
  auto prefix = length_prefix(a.plan());
  return elementwise(a.size(), prefix, threads, schedule,
                     [&](std::size_t seg, std::size_t local, std::size_t len) {
                       double* out = ap[seg] + local;
                       const double* x = bp[seg] + local;
                       const double* y = cp[seg] + local;
                       const double* z = dp[seg] + local;
                       for (std::size_t i = 0; i < len; ++i) out[i] = x[i] + y[i] * z[i];
                     });
}

KernelDescriptor stream_descriptor(StreamKernel kind, std::size_t n) {
  KernelDescriptor d;
  d.name = to_string(kind);
  d.space = LinearSpace{n};
  auto read = [](const char* role, std::size_t idx) {
    return StreamSpec{role, StreamDirection::Read, idx, LinearAt{}, false};
  };
  auto write = [](const char* role, std::size_t idx) {
    return StreamSpec{role, StreamDirection::Write, idx, LinearAt{}, false};
  };
  switch (kind) {
    case StreamKernel::Copy:
      d.streams = {read("A", 0), write("C", 2)};
      d.flops_per_iteration = 0;
      break;
    case StreamKernel::Scale:
      d.streams = {read("C", 2), write("B", 1)};
      d.flops_per_iteration = 1;
      break;
    case StreamKernel::Add:
      d.streams = {read("A", 0), read("B", 1), write("C", 2)};
      d.flops_per_iteration = 1;
      break;
    case StreamKernel::Triad:
      d.streams = {read("B", 1), read("C", 2), write("A", 0)};
      d.flops_per_iteration = 2;
      break;
    case StreamKernel::VectorTriad:
      d.streams = {read("B", 1), read("C", 2), read("D", 3), write("A", 0)};
      d.flops_per_iteration = 2;
      break;
  }
  return d;
}

Jacobi2DGrid Jacobi2DGrid::create(std::size_t n, const LayoutParams& params) {
  return create(n, params, params);
}

Jacobi2DGrid Jacobi2DGrid::create(std::size_t n, const LayoutParams& source_params,
                                  const LayoutParams& dest_params) {
  if (n < 3) throw std::invalid_argument("Jacobi2DGrid: domain too small (n < 3)");
  std::vector<std::size_t> rows(n, n);
  Jacobi2DGrid g;
  g.n = n;
  auto plane = [&rows](const LayoutParams& p) {
    std::size_t alignment = std::max({p.base_alignment, p.segment_alignment, alignof(double)});
    return SegmentedArray::allocate(build_layout(p, rows), alignment);
  };
  g.source = plane(source_params);
  g.dest = plane(dest_params);
  return g;
}

void Jacobi2DGrid::swap_planes() { std::swap(source, dest); }

double jacobi_sweep(Jacobi2DGrid& grid, unsigned threads, const Schedule& schedule) {
  const std::size_t n = grid.n;
  if (n < 3) throw std::invalid_argument("jacobi_sweep: domain too small (n < 3)");

  auto src = segment_ptrs(static_cast<const SegmentedArray&>(grid.source));
  auto dst = segment_ptrs(grid.dest);

  // Fixed boundary ring, copied through outside the timed window.
  std::copy_n(src[0], n, dst[0]);
  std::copy_n(src[n - 1], n, dst[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    dst[i][0] = src[i][0];
    dst[i][n - 1] = src[i][n - 1];
  }

  return timed_parallel(threads, [&](unsigned tid) {
    for (const IndexRange& r : ranges_for(n - 2, threads, tid, schedule)) {
      for (std::size_t idx = r.begin; idx < r.end; ++idx) {
        const std::size_t i = idx + 1;
        const double* above = src[i - 1];
        const double* below = src[i + 1];
        const double* row = src[i];
        double* out = dst[i];
        for (std::size_t j = 1; j + 1 < n; ++j)
          out[j] = (above[j] + below[j] + row[j - 1] + row[j + 1]) * 0.25;
      }
    }
  });
}

KernelDescriptor jacobi_descriptor(std::size_t n) {
  KernelDescriptor d;
  d.name = "jacobi2d";
  d.space = RowGridSpace{n};
  d.flops_per_iteration = 4;
  // Row i+1 is the only source operand fetched from memory; the row above,
  // and the left/right neighbours in the current row, are cache hits.
  d.streams = {
      StreamSpec{"src_above", StreamDirection::Read, 0, StencilAt{-1, 0}, true},
      StreamSpec{"src_below", StreamDirection::Read, 0, StencilAt{+1, 0}, false},
      StreamSpec{"src_left", StreamDirection::Read, 0, StencilAt{0, -1}, true},
      StreamSpec{"src_right", StreamDirection::Read, 0, StencilAt{0, +1}, true},
      StreamSpec{"dest", StreamDirection::Write, 1, StencilAt{0, 0}, false},
  };
  return d;
}

}  // namespace memlane
