#pragma once

#include <cstddef>

#include "memlane/descriptor.hpp"
#include "memlane/layout.hpp"
#include "memlane/schedule.hpp"

namespace memlane {

enum class StreamKernel : std::uint8_t { Copy, Scale, Add, Triad, VectorTriad };

const char* to_string(StreamKernel k);

/// STREAM operations over segmented arrays. All arrays must share the same
/// logical length and segment structure and must not overlap. The returned
/// value is the wall time of the sweep in seconds (worker launch to join).
double stream_copy(const SegmentedArray& a, SegmentedArray& c, unsigned threads,
                   const Schedule& schedule);
double stream_scale(SegmentedArray& b, const SegmentedArray& c, double s, unsigned threads,
                    const Schedule& schedule);
double stream_add(const SegmentedArray& a, const SegmentedArray& b, SegmentedArray& c,
                  unsigned threads, const Schedule& schedule);
double stream_triad(SegmentedArray& a, const SegmentedArray& b, const SegmentedArray& c, double s,
                    unsigned threads, const Schedule& schedule);

/// a = b + c * d (three read streams, one write stream).
double vector_triad(SegmentedArray& a, const SegmentedArray& b, const SegmentedArray& c,
                    const SegmentedArray& d, unsigned threads, const Schedule& schedule);

/// Read/write stream structure of the given kernel at length n. Array
/// indices follow the binding order A, B, C, D.
KernelDescriptor stream_descriptor(StreamKernel kind, std::size_t n);

double stream_scalar_default();

/// n x n source/destination planes with each row stored as one segment.
struct Jacobi2DGrid {
  std::size_t n = 0;
  SegmentedArray source;
  SegmentedArray dest;

  /// Rows are laid out with `params` (segment_alignment/shift drive the
  /// per-row controller placement). Requires n >= 3.
  static Jacobi2DGrid create(std::size_t n, const LayoutParams& params);

  /// Distinct placements for the two planes (e.g. destination offset).
  static Jacobi2DGrid create(std::size_t n, const LayoutParams& source_params,
                             const LayoutParams& dest_params);

  void swap_planes();
};

/// One five-point relaxation sweep: interior of dest receives the four-point
/// average of source; the boundary ring is copied through unchanged (outside
/// the timed window). Result is independent of threads and schedule.
double jacobi_sweep(Jacobi2DGrid& grid, unsigned threads, const Schedule& schedule);

/// Streams: one in-memory source row read, three cache-served reads, one
/// destination write. Arrays bind as [source, dest].
KernelDescriptor jacobi_descriptor(std::size_t n);

}  // namespace memlane
