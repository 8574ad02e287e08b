#include "memlane/descriptor.hpp"

#include <stdexcept>

namespace memlane {

std::size_t LatticeSpace::flat_index(std::size_t x, std::size_t y, std::size_t z, std::size_t v,
                                     std::size_t grid) const {
  const std::size_t dx = dim1();
  const std::size_t d = n + 2;
  switch (layout) {
    case LbmDataLayout::IJKv:  // f(x, y, z, v, grid), x unit stride
      return x + dx * (y + d * (z + d * (v + 19 * grid)));
    case LbmDataLayout::IvJK:  // f(x, v, y, z, grid)
      return x + dx * (v + 19 * (y + d * (z + d * grid)));
  }
  throw std::logic_error("LatticeSpace: bad layout");
}

std::size_t LatticeSpace::values_per_grid() const { return dim1() * (n + 2) * (n + 2) * 19; }

std::size_t KernelDescriptor::read_stream_count() const {
  std::size_t c = 0;
  for (const auto& s : streams) c += (s.direction == StreamDirection::Read);
  return c;
}

std::size_t KernelDescriptor::write_stream_count() const {
  return streams.size() - read_stream_count();
}

std::size_t KernelDescriptor::iteration_count() const {
  if (const auto* lin = std::get_if<LinearSpace>(&space)) return lin->n;
  if (const auto* grid = std::get_if<RowGridSpace>(&space)) {
    std::size_t inner = grid->n >= 2 ? grid->n - 2 : 0;
    return inner * inner;
  }
  const auto& lat = std::get<LatticeSpace>(space);
  return lat.n * lat.n * lat.n;
}

TrafficModel traffic_model(const KernelDescriptor& d) {
  TrafficModel m;
  const double elem = static_cast<double>(d.element_size);
  double mem_reads = 0, mem_writes = 0;
  for (const auto& s : d.streams) {
    m.bytes_total += elem;
    if (s.cache_resident) continue;
    if (s.direction == StreamDirection::Read)
      mem_reads += elem;
    else
      mem_writes += elem;
  }
  m.bytes_memory = mem_reads + mem_writes;
  m.bytes_memory_rfo = m.bytes_memory + (d.write_allocate ? mem_writes : 0.0);
  m.flops = d.flops_per_iteration;
  if (m.flops > 0) {
    m.balance_total = m.bytes_total / m.flops;
    m.balance_memory = m.bytes_memory / m.flops;
    m.balance_memory_rfo = m.bytes_memory_rfo / m.flops;
  }
  m.rfo_ratio = m.bytes_memory > 0 ? m.bytes_memory_rfo / m.bytes_memory : 1.0;
  return m;
}

PredictedRate predicted_performance(const KernelDescriptor& d, double bandwidth_bytes_per_s) {
  if (bandwidth_bytes_per_s <= 0)
    throw std::invalid_argument("predicted_performance: bandwidth must be positive");
  TrafficModel m = traffic_model(d);
  PredictedRate rate;
  if (std::holds_alternative<LinearSpace>(d.space)) {
    // Streaming kernels: convert achievable transfer bandwidth into the
    // reported convention (store lines are moved twice, counted once).
    rate.unit = RateUnit::GBytesPerSec;
    rate.value = bandwidth_bytes_per_s / m.rfo_ratio / 1e9;
  } else {
    rate.unit = RateUnit::MLUPs;
    rate.value = bandwidth_bytes_per_s / m.bytes_memory_rfo / 1e6;
  }
  return rate;
}

}  // namespace memlane
