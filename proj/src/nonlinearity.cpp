#include "surfgrow/nonlinearity.hpp"

#include <cmath>

#include "surfgrow/operators.hpp"
#include "surfgrow/transform.hpp"

namespace surfgrow {

Mat2 f_jacobian(const Vec2& z) {
  const double r2 = z[0] * z[0] + z[1] * z[1];
  const double d = 1.0 + r2;
  const double inv = 1.0 / (d * d);
  return {{{(d - 2.0 * z[0] * z[0]) * inv, -2.0 * z[0] * z[1] * inv},
           {-2.0 * z[1] * z[0] * inv, (d - 2.0 * z[1] * z[1]) * inv}}};
}

double spectral_norm(const Mat2& m) {
  // sigma_max^2 is the largest eigenvalue of m^T m.
  const double a = m[0][0] * m[0][0] + m[1][0] * m[1][0];
  const double b = m[0][0] * m[0][1] + m[1][0] * m[1][1];
  const double c = m[0][1] * m[0][1] + m[1][1] * m[1][1];
  const double half_tr = 0.5 * (a + c);
  const double disc = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  return std::sqrt(half_tr + disc);
}

SpectralField nonlinearity(const SpectralField& u, int n_grid, NonlinearityWork* work) {
  require_resolution(u.lattice(), n_grid);
  NonlinearityWork local;
  NonlinearityWork& w = work ? *work : local;
  const auto cells = static_cast<std::size_t>(n_grid) * n_grid;
  w.gx.resize(cells);
  w.gy.resize(cells);
  w.fx.resize(cells);
  w.fy.resize(cells);

  auto& tr = transform_for(n_grid);
  tr.synthesize(partial_x(u), w.gx);
  tr.synthesize(partial_y(u), w.gy);
  for (std::size_t i = 0; i < cells; ++i) {
    const Vec2 f = f_point({w.gx[i], w.gy[i]});
    w.fx[i] = f[0];
    w.fy[i] = f[1];
  }
  VectorField flux{SpectralField(u.lattice_ptr()), SpectralField(u.lattice_ptr())};
  tr.analyze(w.fx, flux.x);
  tr.analyze(w.fy, flux.y);
  return divergence(flux);
}

double energy(const SpectralField& u, double delta, int n_grid) {
  require_resolution(u.lattice(), n_grid);
  const double bending = sobolev_norm(u, 2.0);
  auto& tr = transform_for(n_grid);
  const auto cells = static_cast<std::size_t>(n_grid) * n_grid;
  std::vector<double> gx(cells), gy(cells);
  tr.synthesize(partial_x(u), gx);
  tr.synthesize(partial_y(u), gy);
  double s = 0.0;
  for (std::size_t i = 0; i < cells; ++i) s += std::log1p(gx[i] * gx[i] + gy[i] * gy[i]);
  const double h = u.lattice().length() / n_grid;
  return 0.5 * (delta * bending * bending - s * h * h);
}

}  // namespace surfgrow
