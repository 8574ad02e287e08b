#include "memlane/layout.hpp"

#include <algorithm>
#include <cstring>
#include <new>
#include <stdexcept>
#include <string>

namespace memlane {

bool is_power_of_two(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

std::size_t align_up(std::size_t x, std::size_t alignment) {
  if (alignment == 0) return x;
  if (!is_power_of_two(alignment)) throw std::invalid_argument("align_up: alignment must be a power of two");
  std::size_t rem = x & (alignment - 1);
  if (rem == 0) return x;
  std::size_t pad = alignment - rem;
  if (x > SIZE_MAX - pad) throw std::overflow_error("align_up: overflow");
  return x + pad;
}

std::vector<std::size_t> partition(std::size_t n, std::size_t parts) {
  if (parts == 0 || n < parts)
    throw std::invalid_argument("partition: need n >= parts >= 1 (n=" + std::to_string(n) +
                                ", parts=" + std::to_string(parts) + ")");
  std::vector<std::size_t> lengths(parts, n / parts);
  for (std::size_t k = 0; k < n % parts; ++k) ++lengths[k];
  return lengths;
}

void LayoutParams::validate() const {
  if (element_size == 0) throw std::invalid_argument("LayoutParams: element_size must be nonzero");
  if (!is_power_of_two(base_alignment))
    throw std::invalid_argument("LayoutParams: base_alignment must be a power of two");
  if (segment_alignment != 0) {
    if (!is_power_of_two(segment_alignment))
      throw std::invalid_argument("LayoutParams: segment_alignment must be a power of two or 0");
    if (shift >= segment_alignment)
      throw std::invalid_argument("LayoutParams: shift must be smaller than segment_alignment");
  }
  if (shift % element_size != 0)
    throw std::invalid_argument("LayoutParams: shift must be a multiple of element_size");
  if (offset % element_size != 0)
    throw std::invalid_argument("LayoutParams: offset must be a multiple of element_size");
}

std::size_t LayoutPlan::logical_length() const {
  std::size_t n = 0;
  for (std::size_t len : segment_lengths) n += len;
  return n;
}

std::size_t LayoutPlan::element_byte_offset(std::size_t segment, std::size_t local) const {
  if (segment >= segment_lengths.size() || local >= segment_lengths[segment])
    throw std::out_of_range("LayoutPlan: element index out of range");
  return segment_byte_offsets[segment] + local * element_size;
}

namespace {

std::size_t checked_add(std::size_t a, std::size_t b) {
  std::size_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("layout plan exceeds address range");
  return r;
}

std::size_t checked_mul(std::size_t a, std::size_t b) {
  std::size_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("layout plan exceeds address range");
  return r;
}

}  // namespace

LayoutPlan build_layout(const LayoutParams& params, std::span<const std::size_t> lengths) {
  params.validate();
  if (lengths.empty()) throw std::invalid_argument("build_layout: lengths must be nonempty");

  const std::size_t elem = params.element_size;
  const std::size_t seg_align = params.segment_alignment;

  LayoutPlan plan;
  plan.element_size = elem;
  plan.segment_byte_offsets.reserve(lengths.size());
  plan.segment_lengths.assign(lengths.begin(), lengths.end());

  // Chain from origin 0; the global offset moves the whole block afterwards.
  std::size_t cursor = 0;
  for (std::size_t k = 0; k < lengths.size(); ++k) {
    std::size_t start = cursor;
    if (k > 0 && seg_align != 0) {
      start = align_up(cursor, seg_align);
      start = checked_add(start, checked_mul(k, params.shift) % seg_align);
    }
    plan.segment_byte_offsets.push_back(checked_add(start, params.offset));
    cursor = checked_add(start, checked_mul(lengths[k], elem));
  }
  plan.total_bytes = checked_add(cursor, params.offset);
  return plan;
}

LayoutPlan flat_layout(std::size_t n, std::size_t element_size) {
  LayoutPlan plan;
  plan.element_size = element_size;
  plan.segment_byte_offsets = {0};
  plan.segment_lengths = {n};
  plan.total_bytes = checked_mul(n, element_size);
  return plan;
}

std::vector<std::size_t> length_prefix(const LayoutPlan& plan) {
  std::vector<std::size_t> prefix(plan.segment_count() + 1, 0);
  for (std::size_t k = 0; k < plan.segment_count(); ++k)
    prefix[k + 1] = prefix[k] + plan.segment_lengths[k];
  return prefix;
}

std::pair<std::size_t, std::size_t> locate(std::span<const std::size_t> prefix, std::size_t logical) {
  if (prefix.size() < 2 || logical >= prefix.back())
    throw std::out_of_range("locate: logical index out of range");
  auto it = std::upper_bound(prefix.begin(), prefix.end(), logical);
  std::size_t segment = static_cast<std::size_t>(it - prefix.begin()) - 1;
  return {segment, logical - prefix[segment]};
}

void detail::AlignedDeleter::operator()(std::byte* p) const {
  ::operator delete[](p, std::align_val_t(alignment));
}

SegmentedArray SegmentedArray::allocate(LayoutPlan plan, std::size_t base_alignment) {
  if (plan.element_size != 8)
    throw std::invalid_argument("SegmentedArray: element_size must be 8 (double precision)");
  if (!is_power_of_two(base_alignment))
    throw std::invalid_argument("SegmentedArray: base_alignment must be a power of two");
  if (plan.segment_byte_offsets.size() != plan.segment_lengths.size())
    throw std::invalid_argument("SegmentedArray: malformed plan");

  SegmentedArray a;
  a.logical_length_ = plan.logical_length();
  a.prefix_ = length_prefix(plan);

  if (plan.total_bytes > 0) {
    std::size_t alignment = std::max(base_alignment, alignof(double));
    auto* p = static_cast<std::byte*>(::operator new[](plan.total_bytes, std::align_val_t(alignment)));
    std::memset(p, 0, plan.total_bytes);
    a.storage_ = std::unique_ptr<std::byte[], detail::AlignedDeleter>(p, detail::AlignedDeleter{alignment});
  }
  a.plan_ = std::move(plan);
  return a;
}

SegmentedArray SegmentedArray::create(std::size_t n, std::size_t segments, const LayoutParams& params) {
  if (n == 0) return {};
  auto lengths = partition(n, segments);
  LayoutPlan plan = build_layout(params, lengths);
  std::size_t alignment = std::max(params.base_alignment, params.segment_alignment);
  return allocate(std::move(plan), std::max<std::size_t>(alignment, alignof(double)));
}

SegmentView SegmentedArray::segment(std::size_t k) {
  if (k >= segment_count()) throw std::out_of_range("SegmentedArray::segment: index out of range");
  auto* p = reinterpret_cast<double*>(storage_.get() + plan_.segment_byte_offsets[k]);
  return {p, plan_.segment_lengths[k]};
}

ConstSegmentView SegmentedArray::segment(std::size_t k) const {
  if (k >= segment_count()) throw std::out_of_range("SegmentedArray::segment: index out of range");
  auto* p = reinterpret_cast<const double*>(storage_.get() + plan_.segment_byte_offsets[k]);
  return {p, plan_.segment_lengths[k]};
}

std::uintptr_t SegmentedArray::element_address(std::size_t segment, std::size_t local) const {
  return base_address() + plan_.element_byte_offset(segment, local);
}

double& SegmentedArray::at(std::size_t logical) {
  auto [k, j] = locate(prefix_, logical);
  return segment(k)[j];
}

double SegmentedArray::at(std::size_t logical) const {
  auto [k, j] = locate(prefix_, logical);
  return segment(k)[j];
}

std::vector<double> SegmentedArray::to_vector() const {
  std::vector<double> out;
  out.reserve(size());
  for_each([&](double v) { out.push_back(v); });
  return out;
}

void SegmentedArray::fill_from(std::span<const double> values) {
  if (values.size() != size()) throw std::invalid_argument("fill_from: size mismatch");
  std::size_t i = 0;
  for (std::size_t k = 0; k < segment_count(); ++k)
    for (double& v : segment(k)) v = values[i++];
}

void SegmentedArray::fill(double value) {
  for (std::size_t k = 0; k < segment_count(); ++k)
    for (double& v : segment(k)) v = value;
}

}  // namespace memlane
