#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace memlane {

/// Round `x` up to the next multiple of `alignment`. An alignment of 0
/// disables rounding. `alignment` must be a power of two.
std::size_t align_up(std::size_t x, std::size_t alignment);

bool is_power_of_two(std::size_t x);

/// Split `n` elements into `parts` contiguous segment lengths: the first
/// n % parts segments get floor(n/parts)+1 elements, the rest floor(n/parts).
/// Requires n >= parts >= 1.
std::vector<std::size_t> partition(std::size_t n, std::size_t parts);

/// Placement parameters for a segmented allocation. All byte quantities.
struct LayoutParams {
  std::size_t element_size = 8;
  std::size_t base_alignment = 8;     // power of two
  std::size_t segment_alignment = 0;  // power of two, 0 = packed segments
  std::size_t shift = 0;              // segment k is displaced by (k*shift) % segment_alignment
  std::size_t offset = 0;             // whole-block displacement
  void validate() const;              // throws std::invalid_argument
};

/// Resolved layout: where each segment lives relative to the allocation base.
struct LayoutPlan {
  std::size_t element_size = 8;
  std::vector<std::size_t> segment_byte_offsets;
  std::vector<std::size_t> segment_lengths;  // elements per segment
  std::size_t total_bytes = 0;

  std::size_t segment_count() const { return segment_lengths.size(); }
  std::size_t logical_length() const;
  std::size_t element_byte_offset(std::size_t segment, std::size_t local) const;
};

/// Resolve LayoutParams against segment lengths. Segment 0 sits at `offset`;
/// each later segment is aligned to segment_alignment and then displaced by
/// (k*shift) % segment_alignment; the whole block is finally moved by
/// `offset`. With segment_alignment == 0 segments pack back to back.
LayoutPlan build_layout(const LayoutParams& params, std::span<const std::size_t> lengths);

/// Single-segment packed plan of n elements.
LayoutPlan flat_layout(std::size_t n, std::size_t element_size = 8);

/// Exclusive prefix sums of segment lengths plus the total; used to resolve
/// logical element indices to (segment, local) pairs.
std::vector<std::size_t> length_prefix(const LayoutPlan& plan);

/// (segment, local) for a logical index, given length_prefix(plan).
std::pair<std::size_t, std::size_t> locate(std::span<const std::size_t> prefix, std::size_t logical);

using SegmentView = std::span<double>;
using ConstSegmentView = std::span<const double>;

namespace detail {
struct AlignedDeleter {
  std::size_t alignment = 0;
  void operator()(std::byte* p) const;
};
}  // namespace detail

/// A plan placed at a concrete (or virtual) base address. The analyzer works
/// on these without touching memory; SegmentedArray::layout() produces one
/// for real storage.
struct ArrayLayout {
  std::uintptr_t base = 0;
  LayoutPlan plan;

  std::uintptr_t segment_address(std::size_t k) const { return base + plan.segment_byte_offsets.at(k); }
  std::uintptr_t element_address(std::size_t k, std::size_t local) const {
    return base + plan.element_byte_offset(k, local);
  }
};

/// Owning double-precision storage for a LayoutPlan. The base address
/// satisfies max(base_alignment, segment_alignment used by the plan);
/// contents are zero on allocation. Concurrent reads are safe; concurrent
/// writes must target disjoint segments (the container does not lock).
class SegmentedArray {
 public:
  SegmentedArray() = default;

  /// Allocate zeroed storage for `plan`. element_size must be 8.
  static SegmentedArray allocate(LayoutPlan plan, std::size_t base_alignment);

  /// partition(n, segments) + build_layout + allocate in one step.
  static SegmentedArray create(std::size_t n, std::size_t segments, const LayoutParams& params);

  const LayoutPlan& plan() const { return plan_; }
  std::size_t size() const { return logical_length_; }
  std::size_t segment_count() const { return plan_.segment_count(); }
  bool empty() const { return logical_length_ == 0; }

  SegmentView segment(std::size_t k);
  ConstSegmentView segment(std::size_t k) const;

  std::uintptr_t base_address() const { return reinterpret_cast<std::uintptr_t>(storage_.get()); }
  std::uintptr_t element_address(std::size_t segment, std::size_t local) const;

  ArrayLayout layout() const { return ArrayLayout{base_address(), plan_}; }

  /// Logical element access (resolves segment boundaries; not a hot path).
  double& at(std::size_t logical);
  double at(std::size_t logical) const;

  /// Visit all elements in logical order.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t k = 0; k < segment_count(); ++k)
      for (double v : segment(k)) fn(v);
  }

  std::vector<double> to_vector() const;
  void fill_from(std::span<const double> values);  // logical order; sizes must match
  void fill(double value);

 private:
  LayoutPlan plan_;
  std::size_t logical_length_ = 0;
  std::vector<std::size_t> prefix_;  // length_prefix cache for at()
  std::unique_ptr<std::byte[], detail::AlignedDeleter> storage_;
};

}  // namespace memlane
