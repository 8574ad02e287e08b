#include "memlane/lbm.hpp"

#include <cmath>
#include <stdexcept>

#include "memlane/parallel.hpp"

namespace memlane {

namespace {

// D3Q19 velocity set. Order: xy/xz diagonals, axes, yz diagonals; the rest
// direction is 0, direction 1 pushes to (x+1, y+1, z) and direction 18 to
// (x, y-1, z-1). Closed under negation; the collision below walks it as
// opposite-direction pairs.
constexpr std::array<std::array<int, 3>, 19> kVelocity = {{
    {0, 0, 0},                                            // 0 rest
    {1, 1, 0}, {-1, 1, 0}, {1, -1, 0}, {-1, -1, 0},       // 1-4   xy diagonals
    {1, 0, 1}, {-1, 0, 1}, {1, 0, -1}, {-1, 0, -1},       // 5-8   xz diagonals
    {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0},         // 9-12  x/y axes
    {0, 0, 1}, {0, 0, -1},                                // 13-14 z axis
    {0, 1, 1}, {0, -1, 1}, {0, 1, -1}, {0, -1, -1},       // 15-18 yz diagonals
}};

constexpr double kWeightRest = 1.0 / 3.0;
constexpr double kWeightAxis = 1.0 / 18.0;
constexpr double kWeightDiagonal = 1.0 / 36.0;

constexpr std::array<double, 19> kWeight = {
    kWeightRest,                                                          //
    kWeightDiagonal, kWeightDiagonal, kWeightDiagonal, kWeightDiagonal,   //
    kWeightDiagonal, kWeightDiagonal, kWeightDiagonal, kWeightDiagonal,   //
    kWeightAxis,     kWeightAxis,     kWeightAxis,     kWeightAxis,       //
    kWeightAxis,     kWeightAxis,                                         //
    kWeightDiagonal, kWeightDiagonal, kWeightDiagonal, kWeightDiagonal,
};

// One BGK cell update, equilibrium evaluated pairwise over opposite
// directions: feq(+/-) = w*rho*((1 - 1.5u^2 + 4.5cu^2) +/- 3cu). The
// arithmetic below is 176 flops (kLbmFlopsPerUpdate): 18 for the density,
// 27 for the momenta, 11 for the velocity and quadratic terms, 3 for the
// per-class prefactors, 3 for the rest update, 12 per axis pair (x3) and
// 13 per diagonal pair (x6).
template <typename T>
void collide_propagate_cell(const T* f, T* const* out, T omega, T keep) {
  const T rho = (((f[0] + f[1]) + (f[2] + f[3])) + ((f[4] + f[5]) + (f[6] + f[7]))) +
                (((f[8] + f[9]) + (f[10] + f[11])) + ((f[12] + f[13]) + (f[14] + f[15]))) +
                ((f[16] + f[17]) + f[18]);

  const T mx = ((f[1] - f[2]) + (f[3] - f[4])) + ((f[5] - f[6]) + (f[7] - f[8])) + (f[9] - f[10]);
  const T my = ((f[1] + f[2]) - (f[3] + f[4])) + (f[11] - f[12]) + ((f[15] - f[16]) + (f[17] - f[18]));
  const T mz = ((f[5] + f[6]) - (f[7] + f[8])) + (f[13] - f[14]) + ((f[15] + f[16]) - (f[17] + f[18]));

  const T inv_rho = T(1) / rho;
  const T ux = mx * inv_rho;
  const T uy = my * inv_rho;
  const T uz = mz * inv_rho;
  const T base = T(1) - T(1.5) * (ux * ux + uy * uy + uz * uz);

  const T wr_rest = T(kWeightRest) * omega * rho;
  const T wr_axis = T(kWeightAxis) * omega * rho;
  const T wr_diag = T(kWeightDiagonal) * omega * rho;

  *out[0] = keep * f[0] + wr_rest * base;

  const auto pair = [&](int plus, int minus, T cu, T wr) {
    const T sym = base + T(4.5) * cu * cu;
    const T asym = T(3) * cu;
    *out[plus] = keep * f[plus] + wr * (sym + asym);
    *out[minus] = keep * f[minus] + wr * (sym - asym);
  };

  pair(1, 4, ux + uy, wr_diag);
  pair(3, 2, ux - uy, wr_diag);
  pair(5, 8, ux + uz, wr_diag);
  pair(7, 6, ux - uz, wr_diag);
  pair(9, 10, ux, wr_axis);
  pair(11, 12, uy, wr_axis);
  pair(13, 14, uz, wr_axis);
  pair(15, 18, uy + uz, wr_diag);
  pair(17, 16, uy - uz, wr_diag);
}

template <typename T>
double run_step(std::vector<T>& storage, const std::vector<std::uint8_t>& fluid,
                const LatticeSpace& space, int from_grid, double tau, unsigned threads,
                const Schedule& schedule) {
  const std::size_t n = space.n;
  const T omega = std::isinf(tau) ? T(0) : T(1.0 / tau);
  const T keep = T(1) - omega;
  const int to_grid = 1 - from_grid;

  // flat_index is affine, so every stream reduces to a per-step constant
  // displacement against the cell's v=0 slot.
  auto stride = [&](std::size_t x, std::size_t y, std::size_t z, std::size_t v) {
    return static_cast<std::ptrdiff_t>(space.flat_index(1 + x, 1 + y, 1 + z, v, 0)) -
           static_cast<std::ptrdiff_t>(space.flat_index(1, 1, 1, 0, 0));
  };
  std::array<std::ptrdiff_t, 19> read_off, write_off;
  for (std::size_t v = 0; v < 19; ++v) {
    read_off[v] = stride(0, 0, 0, v);
    write_off[v] = stride(kVelocity[v][0] + 1, kVelocity[v][1] + 1, kVelocity[v][2] + 1, v) -
                   stride(1, 1, 1, 0);
  }

  T* data = storage.data();
  const std::size_t parallel_n = space.coalesce_zy ? n * n : n;

  return timed_parallel(threads, [&, data](unsigned tid) {
    std::array<T, 19> f;
    std::array<T*, 19> out;
    for (const IndexRange& r : ranges_for(parallel_n, threads, tid, schedule)) {
      for (std::size_t idx = r.begin; idx < r.end; ++idx) {
        std::size_t z_begin, z_end, y_begin, y_end;
        if (space.coalesce_zy) {
          z_begin = 1 + idx / n;
          z_end = z_begin + 1;
          y_begin = 1 + idx % n;
          y_end = y_begin + 1;
        } else {
          z_begin = 1 + idx;
          z_end = z_begin + 1;
          y_begin = 1;
          y_end = n + 1;
        }
        for (std::size_t z = z_begin; z < z_end; ++z) {
          for (std::size_t y = y_begin; y < y_end; ++y) {
            const std::uint8_t* mask_row = fluid.data() + n * ((y - 1) + n * (z - 1));
            const T* row_from = data + space.flat_index(1, y, z, 0, from_grid);
            T* row_to = data + space.flat_index(1, y, z, 0, to_grid);
            for (std::size_t i = 0; i < n; ++i) {
              if (!mask_row[i]) continue;
              for (std::size_t v = 0; v < 19; ++v) {
                f[v] = row_from[static_cast<std::ptrdiff_t>(i) + read_off[v]];
                out[v] = row_to + (static_cast<std::ptrdiff_t>(i) + write_off[v]);
              }
              collide_propagate_cell<T>(f.data(), out.data(), omega, keep);
            }
          }
        }
      }
    }
  });
}

}  // namespace

LbmLattice::LbmLattice(const LbmParams& params) : params_(params) {
  if (params.n == 0) throw std::invalid_argument("LbmLattice: n must be >= 1");
  if (params.element_size != 8 && params.element_size != 4)
    throw std::invalid_argument("LbmLattice: element_size must be 4 or 8");
  if (!(params.tau > 0.5) && !std::isinf(params.tau))
    throw std::invalid_argument("LbmLattice: tau must exceed 0.5");

  const std::size_t values = space().values_per_grid() * 2;
  fluid_.assign(params.n * params.n * params.n, 1);

  // Equilibrium at rest: f_v = w_v * rho on both grids (halo included, so
  // boundary pushes land on sane values).
  if (params.element_size == 8) {
    f64_.assign(values, 0.0);
  } else {
    f32_.assign(values, 0.0f);
  }
  const LatticeSpace sp = space();
  for (std::size_t grid = 0; grid < 2; ++grid)
    for (std::size_t v = 0; v < 19; ++v) {
      const double value = kWeight[v] * params.initial_density;
      for (std::size_t z = 0; z < params.n + 2; ++z)
        for (std::size_t y = 0; y < params.n + 2; ++y)
          for (std::size_t x = 0; x < params.n + 2; ++x) {
            const std::size_t i = sp.flat_index(x, y, z, v, grid);
            if (params.element_size == 8)
              f64_[i] = value;
            else
              f32_[i] = static_cast<float>(value);
          }
    }
}

LatticeSpace LbmLattice::space(bool coalesce) const {
  return LatticeSpace{params_.n, params_.pad_dim1, params_.layout, coalesce};
}

std::size_t LbmLattice::mask_index(std::size_t x, std::size_t y, std::size_t z) const {
  const std::size_t n = params_.n;
  if (x < 1 || x > n || y < 1 || y > n || z < 1 || z > n)
    throw std::out_of_range("LbmLattice: interior coordinates are 1..n");
  return (x - 1) + n * ((y - 1) + n * (z - 1));
}

void LbmLattice::set_solid(std::size_t x, std::size_t y, std::size_t z, bool solid) {
  fluid_[mask_index(x, y, z)] = solid ? 0 : 1;
}

bool LbmLattice::fluid(std::size_t x, std::size_t y, std::size_t z) const {
  return fluid_[mask_index(x, y, z)] != 0;
}

std::size_t LbmLattice::fluid_cell_count() const {
  std::size_t c = 0;
  for (std::uint8_t f : fluid_) c += f;
  return c;
}

double LbmLattice::distribution(std::size_t x, std::size_t y, std::size_t z, std::size_t v) const {
  if (v >= 19 || x > params_.n + 1 || y > params_.n + 1 || z > params_.n + 1)
    throw std::out_of_range("LbmLattice: distribution index out of range");
  const std::size_t i = space().flat_index(x, y, z, v, static_cast<std::size_t>(active_));
  return params_.element_size == 8 ? f64_[i] : static_cast<double>(f32_[i]);
}

void LbmLattice::set_distribution(std::size_t x, std::size_t y, std::size_t z, std::size_t v,
                                  double value) {
  if (v >= 19 || x > params_.n + 1 || y > params_.n + 1 || z > params_.n + 1)
    throw std::out_of_range("LbmLattice: distribution index out of range");
  const std::size_t i = space().flat_index(x, y, z, v, static_cast<std::size_t>(active_));
  if (params_.element_size == 8)
    f64_[i] = value;
  else
    f32_[i] = static_cast<float>(value);
}

double LbmLattice::step(unsigned threads, const Schedule& schedule, bool coalesce) {
  const LatticeSpace sp = space(coalesce);
  double seconds;
  if (params_.element_size == 8)
    seconds = run_step(f64_, fluid_, sp, active_, params_.tau, threads, schedule);
  else
    seconds = run_step(f32_, fluid_, sp, active_, params_.tau, threads, schedule);
  active_ = 1 - active_;
  return seconds;
}

KernelDescriptor LbmLattice::descriptor(bool coalesce) const {
  return lbm_descriptor(params_.n, params_.layout, params_.element_size, params_.pad_dim1,
                        coalesce);
}

std::span<const std::array<int, 3>> LbmLattice::velocities() { return kVelocity; }

std::span<const double> LbmLattice::weights() { return kWeight; }

KernelDescriptor lbm_descriptor(std::size_t n, LbmDataLayout layout, std::size_t element_size,
                                std::size_t pad_dim1, bool coalesce) {
  KernelDescriptor d;
  d.name = "lbm";
  d.space = LatticeSpace{n, pad_dim1, layout, coalesce};
  d.element_size = element_size;
  d.flops_per_iteration = kLbmFlopsPerUpdate;
  d.streams.reserve(38);
  for (int v = 0; v < 19; ++v)
    d.streams.push_back(StreamSpec{"f" + std::to_string(v), StreamDirection::Read, 0,
                                   LatticeAt{0, 0, 0, v, 0}, false});
  for (int v = 0; v < 19; ++v)
    d.streams.push_back(StreamSpec{"f" + std::to_string(v), StreamDirection::Write, 0,
                                   LatticeAt{kVelocity[v][0], kVelocity[v][1], kVelocity[v][2], v, 1},
                                   false});
  return d;
}

const char* to_string(LbmDataLayout layout) {
  return layout == LbmDataLayout::IJKv ? "ijkv" : "ivjk";
}

LbmDataLayout parse_lbm_layout(const std::string& text) {
  if (text == "ijkv" || text == "IJKv") return LbmDataLayout::IJKv;
  if (text == "ivjk" || text == "IvJK") return LbmDataLayout::IvJK;
  throw std::invalid_argument("lbm layout: expected 'ijkv' or 'ivjk', got '" + text + "'");
}

}  // namespace memlane
