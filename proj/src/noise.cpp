#include "surfgrow/noise.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "surfgrow/operators.hpp"

namespace surfgrow {

std::string_view to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::SharpCutoff: return "sharp-cutoff";
    case ProfileKind::SmoothRational: return "smooth-rational";
    case ProfileKind::Exponential: return "exponential";
    case ProfileKind::Identity: return "identity";
  }
  return "unknown";
}

ProfileKind parse_profile_kind(std::string_view name) {
  if (name == "sharp-cutoff") return ProfileKind::SharpCutoff;
  if (name == "smooth-rational") return ProfileKind::SmoothRational;
  if (name == "exponential") return ProfileKind::Exponential;
  if (name == "identity") return ProfileKind::Identity;
  throw std::invalid_argument("unknown profile kind '" + std::string(name) + "'");
}

double RegularizationProfile::multiplier(ProfileKind kind, double epsilon, double delta_eps, double radius) {
  switch (kind) {
    case ProfileKind::Identity: return 1.0;
    case ProfileKind::SharpCutoff:
      if (epsilon == 0.0) return 1.0;
      // |k| <= 1/eps compared as eps |k| <= 1 with a tolerance for exact lattice radii.
      return epsilon * radius <= 1.0 + 1e-12 ? 1.0 : 0.0;
    case ProfileKind::SmoothRational:
      return std::pow(1.0 + epsilon * radius * radius, -0.5 * delta_eps);
    case ProfileKind::Exponential: return std::exp(-epsilon * radius);
  }
  return 1.0;
}

RegularizationProfile::RegularizationProfile(ProfileKind kind, double epsilon, double delta_eps,
                                             LatticePtr lattice)
    : kind_(kind), epsilon_(epsilon), delta_eps_(delta_eps), lattice_(std::move(lattice)) {
  if (!lattice_) throw std::invalid_argument("profile: null lattice");
  if (epsilon < 0.0 || !std::isfinite(epsilon)) throw std::invalid_argument("profile: epsilon must be >= 0");
  if (kind == ProfileKind::SmoothRational && !(delta_eps > 0.0)) {
    throw std::invalid_argument("profile: smooth-rational needs delta_eps > 0");
  }
  values_.resize(lattice_->size());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    values_[i] = multiplier(kind, epsilon, delta_eps, lattice_->mode(i).norm());
  }
}

RegularizationProfile make_profile(ProfileKind kind, double epsilon, double delta_eps, LatticePtr lattice) {
  return RegularizationProfile(kind, epsilon, delta_eps, std::move(lattice));
}

double ou_innovation_variance(double mu, double dt, double delta) {
  const double lambda = delta * mu * mu;
  return -std::expm1(-2.0 * lambda * dt) / (2.0 * lambda);
}

void ou_step(ConvolutionState& state, double dt, const NoiseStream& stream, double delta) {
  if (!(dt > 0.0)) throw std::domain_error("ou_step: dt must be > 0");
  const auto& lat = *state.lattice;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const double m = lat.mu(i);
    const double decay = std::exp(-delta * m * m * dt);
    const double sd = std::sqrt(ou_innovation_variance(m, dt, delta));
    state.z[i] = decay * state.z[i] + sd * stream.gaussian(state.step, lat.mode(i));
  }
  state.t += dt;
  ++state.step;
}

SpectralField readout(const ConvolutionState& state, const RegularizationProfile& profile, double sigma) {
  if (profile.lattice() != *state.lattice) throw std::invalid_argument("readout: lattice mismatch");
  SpectralField out(state.lattice);
  for (std::size_t i = 0; i < state.z.size(); ++i) out[i] = sigma * profile[i] * state.z[i];
  return out;
}

ConvolutionState sample_convolution(const LatticePtr& lattice, double t, const NoiseStream& stream,
                                    double delta) {
  ConvolutionState s(lattice);
  if (t > 0.0) ou_step(s, t, stream, delta);
  return s;
}

namespace {

// (1 - e^{-2 t lambda}) / (2 lambda)
double marginal_variance(double mu, double t, double delta) {
  if (t <= 0.0) return 0.0;
  return ou_innovation_variance(mu, t, delta);
}

}  // namespace

double moment_h_alpha(const RegularizationProfile& profile, double t, double alpha, double delta) {
  if (t < 0.0) throw std::domain_error("moment: t must be >= 0");
  const auto& lat = profile.lattice();
  double s = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const double a = profile[i];
    if (a == 0.0) continue;
    const double m = lat.mu(i);
    s += a * a * (alpha == 0.0 ? 1.0 : std::pow(m, alpha)) * marginal_variance(m, t, delta);
  }
  return s;
}

double moment_l2(const RegularizationProfile& profile, double t, double delta) {
  return moment_h_alpha(profile, t, 0.0, delta);
}

double coupling_moment_l2(const RegularizationProfile& profile, double t, double delta) {
  if (t < 0.0) throw std::domain_error("moment: t must be >= 0");
  const auto& lat = profile.lattice();
  double s = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const double g = 1.0 - profile[i];
    s += g * g * marginal_variance(lat.mu(i), t, delta);
  }
  return s;
}

double pointwise_variance(const RegularizationProfile& profile, double t, double x1, double x2, double delta) {
  if (t < 0.0) throw std::domain_error("pointwise_variance: t must be >= 0");
  const auto& lat = profile.lattice();
  double s = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const double a = profile[i];
    if (a == 0.0) continue;
    const double e = basis_eval(lat.mode(i), x1, x2, lat.length());
    s += a * a * e * e * marginal_variance(lat.mu(i), t, delta);
  }
  return s;
}

double sign_orbit_identity(Mode k, double x1, double x2, double length) {
  if (k.is_zero()) throw std::invalid_argument("sign_orbit_identity: k = 0");
  const int s1[2] = {1, -1};
  double sum = 0.0;
  const int n1 = k.k1 == 0 ? 1 : 2;
  const int n2 = k.k2 == 0 ? 1 : 2;
  for (int a = 0; a < n1; ++a) {
    for (int b = 0; b < n2; ++b) {
      const double e = basis_eval({s1[a] * k.k1, s1[b] * k.k2}, x1, x2, length);
      sum += e * e;
    }
  }
  return sum;
}

double ou_increment_second_moment(Mode k, double length, double s, double t, double delta) {
  return 0.5 * ou_increment_bound(k, length, s, t, delta);
}

double ou_increment_bound(Mode k, double length, double s, double t, double delta) {
  if (s < 0.0 || s > t) throw std::domain_error("ou increment: need 0 <= s <= t");
  const double mu = eigenvalue_mu(k, length);
  const double lambda = delta * mu * mu;
  const double gap = t - s;
  const double a = -std::expm1(-2.0 * gap * lambda);
  const double b = -std::expm1(-gap * lambda);
  const double c = -std::expm1(-2.0 * s * lambda);
  return (a + b * b * c) / lambda;
}

GradCovariance grad_covariance(const RegularizationProfile& profile, double t, double delta) {
  if (t < 0.0) throw std::domain_error("grad_covariance: t must be >= 0");
  const auto& lat = profile.lattice();
  const double L = lat.length();
  const double scale = 2.0 * std::numbers::pi / L;
  GradCovariance cov;
  cov.t = t;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const double a = profile[i];
    if (a == 0.0) continue;
    const Mode k = lat.mode(i);
    const double w = a * a * marginal_variance(lat.mu(i), t, delta);
    // d/dx_i e_k = (2 pi k_i / L) e_{k with k_i negated}
    const double d1 = scale * k.k1 * basis_factor(-k.k1, 0.0, L) * basis_factor(k.k2, 0.0, L);
    const double d2 = scale * k.k2 * basis_factor(k.k1, 0.0, L) * basis_factor(-k.k2, 0.0, L);
    cov.matrix[0][0] += w * d1 * d1;
    cov.matrix[0][1] += w * d1 * d2;
    cov.matrix[1][1] += w * d2 * d2;
  }
  cov.matrix[1][0] = cov.matrix[0][1];
  return cov;
}

double grad_covariance_det(const RegularizationProfile& profile, double t, double delta) {
  return grad_covariance(profile, t, delta).det();
}

double k_from_series(double series, double beta, double floor_m) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::domain_error("k_epsilon: beta must lie in (0, 1)");
  if (!(floor_m > 0.0)) throw std::domain_error("k_epsilon: M must be > 0");
  return std::max(std::pow(series, beta), floor_m);
}

double k_epsilon(const RegularizationProfile& profile, double beta, double floor_m) {
  k_from_series(0.0, beta, floor_m);  // argument checks
  const auto& lat = profile.lattice();
  double s = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const Mode k = lat.mode(i);
    if (k.k1 < 1 || k.k2 > -1) continue;
    const double r = static_cast<double>(k.k1) / k.norm_squared();
    s += r * r * profile[i] * profile[i];
  }
  return k_from_series(s, beta, floor_m);
}

double ucv_upper_bound(const RegularizationProfile& profile, double t, double p, double floor_m, double beta,
                       double delta) {
  if (t < 0.0) throw std::domain_error("ucv_upper_bound: t must be >= 0");
  if (!(p > 1.0)) throw std::domain_error("ucv_upper_bound: p must be > 1");
  const double det = grad_covariance_det(profile, t, delta);
  if (!(det > 0.0)) return std::numeric_limits<double>::infinity();
  const double K = k_epsilon(profile, beta, floor_m);
  return std::pow(2.0 / (1.0 + K - floor_m), p) + kGaussianBallConstant * K * K / std::sqrt(det);
}

}  // namespace surfgrow
