#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace memlane::oracle {

/// Plain nested-loop references for the benchmark kernels: flat row-major
/// storage, no segmentation, no threading. Intended for small inputs
/// (n <= 64 per dimension).

std::vector<double> copy(const std::vector<double>& a);
std::vector<double> scale(double s, const std::vector<double>& c);
std::vector<double> add(const std::vector<double>& a, const std::vector<double>& b);
std::vector<double> triad(const std::vector<double>& b, double s, const std::vector<double>& c);
std::vector<double> vector_triad(const std::vector<double>& b, const std::vector<double>& c,
                                 const std::vector<double>& d);

/// Five-point relaxation of an n x n row-major plane; boundary copied.
std::vector<double> jacobi(const std::vector<double>& source, std::size_t n);

/// D3Q19 state on a flat cell-major grid: f[((z*(n+2) + y)*(n+2) + x)*19 + v],
/// halo included. `fluid` indexes the interior, (x-1) + n*((y-1) + n*(z-1)).
struct LbmState {
  std::size_t n = 0;
  std::vector<double> f;
  std::vector<std::uint8_t> fluid;

  static LbmState uniform(std::size_t n, double density);
  double& at(std::size_t x, std::size_t y, std::size_t z, std::size_t v);
  double at(std::size_t x, std::size_t y, std::size_t z, std::size_t v) const;
};

/// One collide-propagate step (BGK, relaxation time tau) pushed into
/// `destination`, which keeps its old values wherever nothing lands (solid
/// sources and inflow from the halo). Mirrors toggle-grid semantics.
LbmState lbm_step(const LbmState& source, LbmState destination, double tau);

}  // namespace memlane::oracle
