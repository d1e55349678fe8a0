#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "surfgrow/fields.hpp"
#include "surfgrow/noise.hpp"
#include "surfgrow/nonlinearity.hpp"

namespace surfgrow {

enum class InitialCondition { Zero, Random };

/// All run parameters of one trajectory.
struct SimulationConfig {
  double L = 6.283185307179586;
  int N = 16;
  double delta = 1.0;  ///< Bilaplacian coefficient
  double sigma = 1.0;  ///< noise strength
  ProfileKind profile = ProfileKind::SharpCutoff;
  double epsilon = 0.125;
  double delta_eps = 2.0;  ///< decay exponent of the smooth-rational profile
  double dt = 1e-3;
  double T = 0.5;
  std::uint64_t seed = 0;
  int n_grid = 0;  ///< 0 means 4N
  double picard_tol = 1e-6;
  int picard_max_iter = 50;
  InitialCondition u0 = InitialCondition::Zero;
  double u0_amp = 0.01;
  int record_every = 10;  ///< steps between recorded snapshots

  [[nodiscard]] int grid() const { return n_grid > 0 ? n_grid : 4 * N; }
  [[nodiscard]] long steps() const;
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Builds u0 per config; random data uses a reserved counter of the sample's stream.
SpectralField initial_condition(const SimulationConfig& cfg, const LatticePtr& lattice, std::uint64_t sample = 0);

struct SolverState {
  SpectralField u;
  ConvolutionState conv;
  double t = 0.0;

  SolverState(SpectralField u0, LatticePtr lattice) : u(std::move(u0)), conv(std::move(lattice)) {}
};

/// Per-mode ETD1 coefficients for a fixed (lattice, dt, delta).
struct EtdCoefficients {
  std::vector<double> decay;  ///< exp(-dt lambda_k)
  std::vector<double> phi1;   ///< (1 - exp(-dt lambda_k)) / lambda_k
  std::vector<double> noise_sd;

  EtdCoefficients(const WavenumberLattice& lattice, double dt, double delta);
};

/// Exponential integrator for du = (-delta Delta^2 u - div f(grad u)) dt + sigma dW_eps.
///
/// Linear part and stochastic convolution are propagated exactly mode by mode;
/// the nonlinearity is frozen over each step.
class EtdStepper {
 public:
  EtdStepper(const SimulationConfig& cfg, RegularizationProfile profile, NoiseStream stream, double dt,
             bool nonlinear = true);

  void step(SolverState& state, NonlinearityWork* work = nullptr) const;

  [[nodiscard]] const RegularizationProfile& profile() const { return profile_; }
  [[nodiscard]] const NoiseStream& stream() const { return stream_; }
  [[nodiscard]] double dt() const { return dt_; }
  [[nodiscard]] double sigma() const { return sigma_; }
  [[nodiscard]] double delta() const { return delta_; }
  [[nodiscard]] int n_grid() const { return n_grid_; }
  [[nodiscard]] bool nonlinear() const { return nonlinear_; }

 private:
  RegularizationProfile profile_;
  NoiseStream stream_;
  double dt_;
  double sigma_;
  double delta_;
  int n_grid_;
  bool nonlinear_;
  EtdCoefficients coef_;
};

/// Functional form of one step; see EtdStepper.
SolverState step_etd(const SolverState& state, const EtdStepper& stepper);

/// Growth rate mu_k - delta mu_k^2 of mode k in the linearization about 0.
double linear_growth_rate(Mode k, double delta, double length);

struct Diagnostics {
  double t = 0.0;
  double energy = 0.0;
  double l2_norm = 0.0;
  double h1_norm = 0.0;
  double f_l2 = 0.0;        ///< ||f(grad u)||_{L^2} by grid quadrature
  double sup_grad_v = 0.0;  ///< grid max of |grad (u - Z_eps)|
};

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> snapshots;
  std::vector<Diagnostics> diagnostics;
};

/// Diagnostics of the state; v = u - sigma alpha Z.
Diagnostics diagnose(const SolverState& state, const EtdStepper& stepper);

/// One trajectory from config; sample selects the noise stream.
Trajectory simulate(const SimulationConfig& cfg, std::uint64_t sample = 0);

// ---- mild-solution fixed point ----

/// Frozen realization Z_k(t_j), t_j = j dt, of the convolution on a time grid.
struct NoisePath {
  LatticePtr lattice;
  double dt = 0.0;
  std::vector<std::vector<double>> z;  ///< z[j][mode]

  [[nodiscard]] std::size_t steps() const { return z.empty() ? 0 : z.size() - 1; }
};

/// Same recursion and counters as EtdStepper, so both see one realization.
NoisePath make_noise_path(const LatticePtr& lattice, double dt, long steps, const NoiseStream& stream,
                          double delta = 1.0);

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(int iterations, double residual);
  [[nodiscard]] int iterations() const { return iterations_; }
  [[nodiscard]] double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

struct PicardResult {
  Trajectory trajectory;  ///< every grid time, snapshots only
  int iterations = 0;
  std::vector<double> residuals;  ///< sup_t H^1 distance between successive iterates
};

/// Iterates u <- e^{tA} u0 - int_0^t e^{(t-s)A} F(u(s)) ds + sigma Z_eps(t) on the path's grid
/// with kernel-exact left-endpoint weights, starting from the linear solution.
PicardResult picard_solve(const SpectralField& u0, const NoisePath& path, const RegularizationProfile& profile,
                          double sigma, double delta, int n_grid, double tol, int max_iter,
                          bool nonlinear = true);

/// 2 Gamma(3/2) (T Gamma(1/2)^2 / (2e))^{n/2} / Gamma((n+2)/2): Lipschitz bound of the n-fold map.
double contraction_constant(int n, double T);

}  // namespace surfgrow
