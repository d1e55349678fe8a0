#include "surfgrow/operators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace surfgrow {

double eigenvalue_mu(Mode k, double length) {
  if (k.is_zero()) throw std::invalid_argument("eigenvalue_mu: k = 0 is not a lattice mode");
  if (!(length > 0.0)) throw std::invalid_argument("eigenvalue_mu: L must be positive");
  const double s = 2.0 * std::numbers::pi / length;
  return s * s * k.norm_squared();
}

double basis_factor(int m, double z, double length) {
  const double arg = 2.0 * std::numbers::pi * std::abs(m) * z / length;
  if (m == 0) return 1.0 / std::sqrt(length);
  const double s = std::sqrt(2.0 / length);
  return m > 0 ? s * std::sin(arg) : s * std::cos(arg);
}

double basis_eval(Mode k, double x1, double x2, double length) {
  if (!(length > 0.0)) throw std::invalid_argument("basis_eval: L must be positive");
  if (x1 < 0.0 || x1 > length || x2 < 0.0 || x2 > length) {
    throw std::domain_error("basis_eval: point outside [0, L]^2");
  }
  return basis_factor(k.k1, x1, length) * basis_factor(k.k2, x2, length);
}

double sobolev_norm(const SpectralField& u, double alpha) {
  const auto& lat = u.lattice();
  double s = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const double c = u[i];
    s += (alpha == 0.0 ? 1.0 : std::pow(lat.mu(i), alpha)) * c * c;
  }
  return std::sqrt(s);
}

double sobolev_norm(const VectorField& g, double alpha) {
  const double a = sobolev_norm(g.x, alpha);
  const double b = sobolev_norm(g.y, alpha);
  return std::sqrt(a * a + b * b);
}

SpectralField fractional_laplacian(const SpectralField& u, double alpha) {
  SpectralField out = u;
  if (alpha == 0.0) return out;
  const auto& lat = u.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i) out[i] *= std::pow(lat.mu(i), 0.5 * alpha);
  return out;
}

namespace {

SpectralField partial(const SpectralField& u, bool first_axis) {
  const auto& lat = u.lattice();
  SpectralField out(u.lattice_ptr());
  const double scale = 2.0 * std::numbers::pi / lat.length();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const Mode k = lat.mode(i);
    const int ki = first_axis ? k.k1 : k.k2;
    if (ki == 0) continue;
    const Mode target = first_axis ? Mode{-k.k1, k.k2} : Mode{k.k1, -k.k2};
    out[lat.index_of(target)] += scale * ki * u[i];
  }
  return out;
}

}  // namespace

SpectralField partial_x(const SpectralField& u) { return partial(u, true); }
SpectralField partial_y(const SpectralField& u) { return partial(u, false); }

VectorField gradient(const SpectralField& u) { return {partial_x(u), partial_y(u)}; }

SpectralField divergence(const VectorField& g) { return partial_x(g.x) + partial_y(g.y); }

SpectralField laplacian(const SpectralField& u) {
  SpectralField out = u;
  const auto& lat = u.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i) out[i] *= -lat.mu(i);
  return out;
}

SpectralField semigroup_apply(const SpectralField& u, double t, double delta) {
  if (t < 0.0) throw std::domain_error("semigroup_apply: t must be >= 0");
  if (!(delta > 0.0)) throw std::domain_error("semigroup_apply: delta must be > 0");
  SpectralField out = u;
  if (t == 0.0) return out;
  const auto& lat = u.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const double m = lat.mu(i);
    out[i] *= std::exp(-t * delta * m * m);
  }
  return out;
}

double semigroup_norm_bound(double alpha, double beta, double t) {
  if (!(beta > alpha)) throw std::domain_error("semigroup_norm_bound: need beta > alpha");
  if (!(t > 0.0)) throw std::domain_error("semigroup_norm_bound: need t > 0");
  const double gap = beta - alpha;
  return std::pow(gap / (4.0 * std::numbers::e), gap / 4.0) * std::pow(t, -gap / 4.0);
}

}  // namespace surfgrow
