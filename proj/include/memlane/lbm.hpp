#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "memlane/descriptor.hpp"
#include "memlane/schedule.hpp"

namespace memlane {

/// Flop count of one BGK cell update in this implementation (pairwise
/// equilibrium evaluation over opposite directions).
inline constexpr double kLbmFlopsPerUpdate = 176.0;

struct LbmParams {
  std::size_t n = 8;                          // interior edge; grid spans 0..n+1 per axis
  LbmDataLayout layout = LbmDataLayout::IJKv;
  std::size_t element_size = 8;               // 8 (double) or 4 (float)
  std::size_t pad_dim1 = 0;                   // extra elements after the unit-stride dimension
  double tau = 1.0;                           // BGK relaxation time; +inf disables collision
  double initial_density = 1.0;
};

/// D3Q19 lattice with two toggle grids and a one-cell halo. A step reads the
/// active grid, collides, and pushes the post-collision distributions to the
/// neighbour cells of the other grid, which then becomes active.
class LbmLattice {
 public:
  explicit LbmLattice(const LbmParams& params);

  const LbmParams& params() const { return params_; }
  std::size_t n() const { return params_.n; }
  int active_grid() const { return active_; }
  std::size_t fluid_cell_count() const;

  /// Interior coordinates are 1..n.
  void set_solid(std::size_t x, std::size_t y, std::size_t z, bool solid);
  bool fluid(std::size_t x, std::size_t y, std::size_t z) const;

  /// Distribution access on the active grid (halo coordinates 0..n+1 allowed).
  double distribution(std::size_t x, std::size_t y, std::size_t z, std::size_t v) const;
  void set_distribution(std::size_t x, std::size_t y, std::size_t z, std::size_t v, double value);

  /// One collide-propagate sweep over all fluid cells; swaps the toggle
  /// grids. Returns the wall time of the parallel sweep in seconds.
  double step(unsigned threads, const Schedule& schedule, bool coalesce = false);

  KernelDescriptor descriptor(bool coalesce = false) const;

  LatticeSpace space(bool coalesce = false) const;

  static std::span<const std::array<int, 3>> velocities();
  static std::span<const double> weights();

 private:
  std::size_t mask_index(std::size_t x, std::size_t y, std::size_t z) const;

  LbmParams params_;
  std::vector<double> f64_;
  std::vector<float> f32_;
  std::vector<std::uint8_t> fluid_;
  int active_ = 0;
};

/// Stream structure of one lattice-site update: 19 reads from the local cell
/// of the active grid, 19 writes pushed to neighbours on the other grid.
KernelDescriptor lbm_descriptor(std::size_t n, LbmDataLayout layout, std::size_t element_size,
                                std::size_t pad_dim1 = 0, bool coalesce = false);

const char* to_string(LbmDataLayout layout);
LbmDataLayout parse_lbm_layout(const std::string& text);

}  // namespace memlane
