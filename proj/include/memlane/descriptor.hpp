#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace memlane {

enum class StreamDirection : std::uint8_t { Read, Write };

enum class LbmDataLayout : std::uint8_t { IJKv, IvJK };

/// 1D element streams: iteration i touches element i*stride.
struct LinearAt {
  long stride = 1;
};

/// Row/column displacement against the (row, col) iteration point of a 2D
/// stencil whose rows are layout segments.
struct StencilAt {
  long drow = 0;
  long dcol = 0;
};

/// Lattice displacement against the (x, y, z) iteration point; `velocity`
/// selects the distribution index, `grid` the toggle grid.
struct LatticeAt {
  int dx = 0;
  int dy = 0;
  int dz = 0;
  int velocity = 0;
  int grid = 0;
};

using StreamAddress = std::variant<LinearAt, StencilAt, LatticeAt>;

/// One load or store stream of a kernel.
struct StreamSpec {
  std::string role;
  StreamDirection direction = StreamDirection::Read;
  std::size_t array_index = 0;  // position in the bound layout set
  StreamAddress at{LinearAt{}};
  bool cache_resident = false;  // operand is served from cache, no memory traffic
};

/// Iteration space of the loop nest. The parallel loop always runs over the
/// outermost dimension (elements, rows, or z-planes).
struct LinearSpace {
  std::size_t n = 0;
};

struct RowGridSpace {  // interior of an n x n grid; rows 1..n-2, cols 1..n-2
  std::size_t n = 0;
};

/// Cubic D3Q19 lattice geometry: interior edge n, one halo cell per side,
/// optional padding appended to the first (unit-stride) dimension.
struct LatticeSpace {
  std::size_t n = 0;
  std::size_t pad_dim1 = 0;
  LbmDataLayout layout = LbmDataLayout::IJKv;
  bool coalesce_zy = false;  // flatten the z and y loops into the parallel loop

  std::size_t dim1() const { return n + 2 + pad_dim1; }
  std::size_t flat_index(std::size_t x, std::size_t y, std::size_t z, std::size_t v,
                         std::size_t grid) const;
  std::size_t values_per_grid() const;
};

using IterationSpace = std::variant<LinearSpace, RowGridSpace, LatticeSpace>;

/// Declarative read/write structure of a kernel: enough to generate access
/// traces and to compute traffic models without running the kernel.
struct KernelDescriptor {
  std::string name;
  IterationSpace space{LinearSpace{}};
  std::vector<StreamSpec> streams;
  double flops_per_iteration = 0.0;
  std::size_t element_size = 8;
  bool write_allocate = true;  // stores miss into whole lines (RFO traffic)

  std::size_t read_stream_count() const;
  std::size_t write_stream_count() const;
  /// Bytes touched per iteration over all declared streams, RFO excluded.
  std::size_t bytes_per_iteration() const { return element_size * streams.size(); }
  /// Iterations in the full loop nest (elements / interior cells / sites).
  std::size_t iteration_count() const;
};

/// Byte and flop accounting per iteration, derived from the stream list.
struct TrafficModel {
  double bytes_total = 0;       // all declared streams, no RFO (reporting convention)
  double bytes_memory = 0;      // streams that actually reach memory, no RFO
  double bytes_memory_rfo = 0;  // plus line fills for write-allocate stores
  double flops = 0;
  double balance_total = 0;       // bytes_total / flops
  double balance_memory = 0;      // bytes_memory / flops
  double balance_memory_rfo = 0;  // bytes_memory_rfo / flops
  double rfo_ratio = 1.0;         // bytes_memory_rfo / bytes_memory
};

TrafficModel traffic_model(const KernelDescriptor& d);

enum class RateUnit : std::uint8_t { GBytesPerSec, MLUPs };

struct PredictedRate {
  double value = 0;
  RateUnit unit = RateUnit::GBytesPerSec;
};

/// Performance expected from a measured memory bandwidth (bytes/s): site
/// update rate for grid kernels, reported-convention bandwidth for streaming
/// kernels.
PredictedRate predicted_performance(const KernelDescriptor& d, double bandwidth_bytes_per_s);

}  // namespace memlane
