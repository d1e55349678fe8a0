#pragma once

#include <array>

#include "surfgrow/fields.hpp"

namespace surfgrow {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

/// f(z) = z / (1 + |z|^2).
inline Vec2 f_point(const Vec2& z) {
  const double d = 1.0 + z[0] * z[0] + z[1] * z[1];
  return {z[0] / d, z[1] / d};
}

/// Jacobian of f: ((1 + |z|^2) I - 2 z z^T) / (1 + |z|^2)^2.
Mat2 f_jacobian(const Vec2& z);

/// Largest singular value of a 2x2 matrix.
double spectral_norm(const Mat2& m);

/// Grid quantities produced while evaluating the nonlinearity once.
struct NonlinearityWork {
  std::vector<double> gx, gy;  ///< grad u on the grid
  std::vector<double> fx, fy;  ///< f(grad u) on the grid
};

/// Dealiased Galerkin projection of div f(grad u), with f evaluated on an
/// n_grid x n_grid padded grid. When work is non-null, the grid gradient and
/// flux are left in it for diagnostics.
SpectralField nonlinearity(const SpectralField& u, int n_grid, NonlinearityWork* work = nullptr);

/// E(u) = 1/2 (delta ||Delta u||^2 - int ln(1 + |grad u|^2) dx), integral by grid quadrature.
double energy(const SpectralField& u, double delta, int n_grid);

}  // namespace surfgrow
