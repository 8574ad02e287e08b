#include "memlane/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "memlane/lbm.hpp"

namespace memlane::oracle {

std::vector<double> copy(const std::vector<double>& a) { return a; }

std::vector<double> scale(double s, const std::vector<double>& c) {
  std::vector<double> b(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) b[i] = s * c[i];
  return b;
}

std::vector<double> add(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("oracle::add: size mismatch");
  std::vector<double> c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

std::vector<double> triad(const std::vector<double>& b, double s, const std::vector<double>& c) {
  if (b.size() != c.size()) throw std::invalid_argument("oracle::triad: size mismatch");
  std::vector<double> a(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = b[i] + s * c[i];
  return a;
}

std::vector<double> vector_triad(const std::vector<double>& b, const std::vector<double>& c,
                                 const std::vector<double>& d) {
  if (b.size() != c.size() || b.size() != d.size())
    throw std::invalid_argument("oracle::vector_triad: size mismatch");
  std::vector<double> a(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = b[i] + c[i] * d[i];
  return a;
}

std::vector<double> jacobi(const std::vector<double>& source, std::size_t n) {
  if (n < 3 || source.size() != n * n) throw std::invalid_argument("oracle::jacobi: bad plane");
  std::vector<double> dest = source;
  for (std::size_t i = 1; i < n - 1; ++i)
    for (std::size_t j = 1; j < n - 1; ++j)
      dest[i * n + j] = (source[(i - 1) * n + j] + source[(i + 1) * n + j] +
                         source[i * n + j - 1] + source[i * n + j + 1]) *
                        0.25;
  return dest;
}

LbmState LbmState::uniform(std::size_t n, double density) {
  LbmState s;
  s.n = n;
  s.f.resize((n + 2) * (n + 2) * (n + 2) * 19);
  s.fluid.assign(n * n * n, 1);
  auto w = LbmLattice::weights();
  for (std::size_t cell = 0; cell < (n + 2) * (n + 2) * (n + 2); ++cell)
    for (std::size_t v = 0; v < 19; ++v) s.f[cell * 19 + v] = w[v] * density;
  return s;
}

double& LbmState::at(std::size_t x, std::size_t y, std::size_t z, std::size_t v) {
  return f[((z * (n + 2) + y) * (n + 2) + x) * 19 + v];
}

double LbmState::at(std::size_t x, std::size_t y, std::size_t z, std::size_t v) const {
  return f[((z * (n + 2) + y) * (n + 2) + x) * 19 + v];
}

LbmState lbm_step(const LbmState& source, LbmState destination, double tau) {
  const std::size_t n = source.n;
  if (destination.n != n || destination.f.size() != source.f.size())
    throw std::invalid_argument("oracle::lbm_step: grid shape mismatch");
  const double omega = std::isinf(tau) ? 0.0 : 1.0 / tau;
  auto vel = LbmLattice::velocities();
  auto w = LbmLattice::weights();

  for (std::size_t z = 1; z <= n; ++z)
    for (std::size_t y = 1; y <= n; ++y)
      for (std::size_t x = 1; x <= n; ++x) {
        if (!source.fluid[(x - 1) + n * ((y - 1) + n * (z - 1))]) continue;
        double rho = 0, mx = 0, my = 0, mz = 0;
        for (std::size_t v = 0; v < 19; ++v) {
          const double fv = source.at(x, y, z, v);
          rho += fv;
          mx += vel[v][0] * fv;
          my += vel[v][1] * fv;
          mz += vel[v][2] * fv;
        }
        const double ux = mx / rho, uy = my / rho, uz = mz / rho;
        const double usq = ux * ux + uy * uy + uz * uz;
        for (std::size_t v = 0; v < 19; ++v) {
          const double cu = vel[v][0] * ux + vel[v][1] * uy + vel[v][2] * uz;
          const double feq = w[v] * rho * (1.0 + 3.0 * cu + 4.5 * cu * cu - 1.5 * usq);
          const double fv = source.at(x, y, z, v);
          destination.at(x + vel[v][0], y + vel[v][1], z + vel[v][2], v) = fv + omega * (feq - fv);
        }
      }
  return destination;
}

}  // namespace memlane::oracle
