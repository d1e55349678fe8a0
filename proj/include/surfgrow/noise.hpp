#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "surfgrow/fields.hpp"
#include "surfgrow/random.hpp"

namespace surfgrow {

enum class ProfileKind { SharpCutoff, SmoothRational, Exponential, Identity };

std::string_view to_string(ProfileKind kind);
ProfileKind parse_profile_kind(std::string_view name);

/// Radial noise multipliers alpha_k in [0, 1], evaluated on one lattice.
class RegularizationProfile {
 public:
  RegularizationProfile(ProfileKind kind, double epsilon, double delta_eps, LatticePtr lattice);

  /// Multiplier for a wavenumber of length |k| = radius.
  [[nodiscard]] static double multiplier(ProfileKind kind, double epsilon, double delta_eps, double radius);

  [[nodiscard]] ProfileKind kind() const { return kind_; }
  [[nodiscard]] double epsilon() const { return epsilon_; }
  [[nodiscard]] double delta_eps() const { return delta_eps_; }
  [[nodiscard]] const WavenumberLattice& lattice() const { return *lattice_; }
  [[nodiscard]] const LatticePtr& lattice_ptr() const { return lattice_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

 private:
  ProfileKind kind_;
  double epsilon_;
  double delta_eps_;
  LatticePtr lattice_;
  std::vector<double> values_;
};

RegularizationProfile make_profile(ProfileKind kind, double epsilon, double delta_eps, LatticePtr lattice);

/// Per-mode OU values Z_k(t) of the unregularized stochastic convolution.
/// The profile and sigma are applied on readout.
struct ConvolutionState {
  LatticePtr lattice;
  double t = 0.0;
  std::uint64_t step = 0;  ///< counter consumed by the noise stream
  std::vector<double> z;

  explicit ConvolutionState(LatticePtr lat) : lattice(std::move(lat)), z(lattice->size(), 0.0) {}
};

/// Exact OU transition over dt with rate delta * mu_k^2 for every mode; draws
/// the Gaussian innovations from stream at counter state.step.
void ou_step(ConvolutionState& state, double dt, const NoiseStream& stream, double delta = 1.0);

/// Innovation variance (1 - exp(-2 lambda dt)) / (2 lambda), lambda = delta mu^2.
double ou_innovation_variance(double mu, double dt, double delta = 1.0);

/// sigma * alpha_k * Z_k(t): the regularized convolution scaled by noise strength.
SpectralField readout(const ConvolutionState& state, const RegularizationProfile& profile, double sigma);

/// Draws Z(t) from Z(0) = 0 with one exact step.
ConvolutionState sample_convolution(const LatticePtr& lattice, double t, const NoiseStream& stream,
                                    double delta = 1.0);

// ---- closed-form moments (sigma = 1; multiply by sigma^2 where needed) ----

/// E||Z_eps(t)||_{L^2}^2 = sum alpha_k^2 (1 - e^{-2 t lambda_k}) / (2 lambda_k).
double moment_l2(const RegularizationProfile& profile, double t, double delta = 1.0);

/// E||Z_eps(t)||_{H^alpha}^2 = sum alpha_k^2 mu_k^alpha (1 - e^{-2 t lambda_k}) / (2 lambda_k).
double moment_h_alpha(const RegularizationProfile& profile, double t, double alpha, double delta = 1.0);

/// E||Z - Z_eps||_{L^2}^2 under shared per-mode noise.
double coupling_moment_l2(const RegularizationProfile& profile, double t, double delta = 1.0);

/// Var Z_eps(t, x) = sum alpha_k^2 e_k(x)^2 (1 - e^{-2 t lambda_k}) / (2 lambda_k).
double pointwise_variance(const RegularizationProfile& profile, double t, double x1, double x2,
                          double delta = 1.0);

/// Sum of e_j(x)^2 over the sign orbit {(+-k1, +-k2)} of k.
double sign_orbit_identity(Mode k, double x1, double x2, double length);

/// E|Z_k(t) - Z_k(s)|^2 exactly:
/// [(1 - e^{-2 (t-s) lambda}) + (1 - e^{-(t-s) lambda})^2 (1 - e^{-2 s lambda})] / (2 lambda).
double ou_increment_second_moment(Mode k, double length, double s, double t, double delta = 1.0);

/// Twice the exact value: the Cauchy-Schwarz style upper bound on the increment moment.
double ou_increment_bound(Mode k, double length, double s, double t, double delta = 1.0);

/// Raw covariance of grad Z_eps(t, 0), without 1/K_eps^2 scaling.
struct GradCovariance {
  std::array<std::array<double, 2>, 2> matrix{};
  double t = 0.0;

  [[nodiscard]] double det() const {
    return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
  }
};

GradCovariance grad_covariance(const RegularizationProfile& profile, double t, double delta = 1.0);
double grad_covariance_det(const RegularizationProfile& profile, double t, double delta = 1.0);

/// max(S^beta, M) for a given quarter-lattice sum S.
double k_from_series(double series, double beta, double floor_m);

/// max(S^beta, M) with S = sum_{k1 >= 1, k2 <= -1} (k1 / |k|^2)^2 alpha_k^2.
double k_epsilon(const RegularizationProfile& profile, double beta, double floor_m);

/// (2 / (1 + K - M))^p + C0 K^2 / sqrt(det), C0 = 1/2; +infinity when det = 0.
double ucv_upper_bound(const RegularizationProfile& profile, double t, double p, double floor_m, double beta,
                       double delta = 1.0);

inline constexpr double kGaussianBallConstant = 0.5;

}  // namespace surfgrow
