#include "surfgrow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "surfgrow/operators.hpp"
#include "surfgrow/transform.hpp"

namespace surfgrow {

long SimulationConfig::steps() const { return std::lround(T / dt); }

void SimulationConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& why) {
    throw std::invalid_argument(key + ": " + why);
  };
  if (!(L > 0.0) || !std::isfinite(L)) fail("L", "must be positive");
  if (N < 1) fail("N", "must be >= 1");
  if (!(delta > 0.0)) fail("delta", "must be > 0");
  if (!(sigma >= 0.0)) fail("sigma", "must be >= 0");
  if (!(epsilon >= 0.0)) fail("eps", "must be >= 0");
  if (profile == ProfileKind::SmoothRational && !(delta_eps > 0.0)) fail("delta_eps", "must be > 0");
  if (!(dt > 0.0)) fail("dt", "must be > 0");
  if (!(T >= dt)) fail("T", "must be >= dt");
  if (std::abs(steps() * dt - T) > 1e-9 * T) fail("T", "must be an integer multiple of dt");
  if (n_grid != 0 && n_grid < 2 * N + 2) fail("n_grid", "must be >= 2N+2");
  if (!(picard_tol > 0.0)) fail("picard_tol", "must be > 0");
  if (picard_max_iter < 1) fail("picard_max_iter", "must be >= 1");
  if (!(u0_amp >= 0.0)) fail("u0_amp", "must be >= 0");
  if (record_every < 1) fail("record_every", "must be >= 1");
}

SpectralField initial_condition(const SimulationConfig& cfg, const LatticePtr& lattice, std::uint64_t sample) {
  SpectralField u0(lattice);
  if (cfg.u0 == InitialCondition::Zero || cfg.u0_amp == 0.0) return u0;
  // Low modes only, so the data is smooth on every truncation.
  const NoiseStream stream(cfg.seed, sample);
  constexpr auto kInitCounter = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t i = 0; i < lattice->size(); ++i) {
    const Mode k = lattice->mode(i);
    if (k.norm_squared() > 16) continue;
    u0[i] = cfg.u0_amp * stream.gaussian(kInitCounter, k);
  }
  return u0;
}

EtdCoefficients::EtdCoefficients(const WavenumberLattice& lattice, double dt, double delta) {
  const auto n = lattice.size();
  decay.resize(n);
  phi1.resize(n);
  noise_sd.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double m = lattice.mu(i);
    const double lambda = delta * m * m;
    decay[i] = std::exp(-delta * m * m * dt);
    phi1[i] = -std::expm1(-lambda * dt) / lambda;
    noise_sd[i] = std::sqrt(ou_innovation_variance(m, dt, delta));
  }
}

EtdStepper::EtdStepper(const SimulationConfig& cfg, RegularizationProfile profile, NoiseStream stream, double dt,
                       bool nonlinear)
    : profile_(std::move(profile)),
      stream_(stream),
      dt_(dt),
      sigma_(cfg.sigma),
      delta_(cfg.delta),
      n_grid_(cfg.grid()),
      nonlinear_(nonlinear),
      coef_(profile_.lattice(), dt, cfg.delta) {
  if (!(dt > 0.0)) throw std::domain_error("EtdStepper: dt must be > 0");
  require_resolution(profile_.lattice(), n_grid_);
}

void EtdStepper::step(SolverState& state, NonlinearityWork* work) const {
  const auto& lat = profile_.lattice();
  if (state.u.lattice() != lat || *state.conv.lattice != lat) {
    throw std::invalid_argument("step_etd: state lattice does not match stepper");
  }
  std::optional<SpectralField> F;
  if (nonlinear_) F = nonlinearity(state.u, n_grid_, work);

  auto u = state.u.coeffs();
  auto& z = state.conv.z;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const double eta = coef_.noise_sd[i] * stream_.gaussian(state.conv.step, lat.mode(i));
    z[i] = coef_.decay[i] * z[i] + eta;
    double next = coef_.decay[i] * u[i];
    if (F) next -= coef_.phi1[i] * (*F)[i];
    u[i] = next + sigma_ * profile_[i] * eta;
  }
  state.conv.t += dt_;
  ++state.conv.step;
  state.t += dt_;
}

SolverState step_etd(const SolverState& state, const EtdStepper& stepper) {
  SolverState next = state;
  stepper.step(next);
  return next;
}

double linear_growth_rate(Mode k, double delta, double length) {
  const double mu = eigenvalue_mu(k, length);
  return mu - delta * mu * mu;
}

Diagnostics diagnose(const SolverState& state, const EtdStepper& stepper) {
  Diagnostics d;
  d.t = state.t;
  const int n = stepper.n_grid();
  d.energy = energy(state.u, stepper.delta(), n);
  d.l2_norm = sobolev_norm(state.u, 0.0);
  d.h1_norm = sobolev_norm(state.u, 1.0);

  auto& tr = transform_for(n);
  const auto cells = static_cast<std::size_t>(n) * n;
  std::vector<double> gx(cells), gy(cells);
  tr.synthesize(partial_x(state.u), gx);
  tr.synthesize(partial_y(state.u), gy);
  double fsum = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    const Vec2 f = f_point({gx[i], gy[i]});
    fsum += f[0] * f[0] + f[1] * f[1];
  }
  const double h = state.u.lattice().length() / n;
  d.f_l2 = std::sqrt(fsum * h * h);

  const SpectralField v = state.u - readout(state.conv, stepper.profile(), stepper.sigma());
  tr.synthesize(partial_x(v), gx);
  tr.synthesize(partial_y(v), gy);
  for (std::size_t i = 0; i < cells; ++i) d.sup_grad_v = std::max(d.sup_grad_v, std::hypot(gx[i], gy[i]));
  return d;
}

Trajectory simulate(const SimulationConfig& cfg, std::uint64_t sample) {
  cfg.validate();
  auto lattice = make_lattice(cfg.L, cfg.N);
  EtdStepper stepper(cfg, make_profile(cfg.profile, cfg.epsilon, cfg.delta_eps, lattice),
                     NoiseStream(cfg.seed, sample), cfg.dt);
  SolverState state(initial_condition(cfg, lattice, sample), lattice);
  Trajectory traj;
  auto record = [&] {
    traj.times.push_back(state.t);
    traj.snapshots.push_back(state.u);
    traj.diagnostics.push_back(diagnose(state, stepper));
  };
  record();
  const long steps = cfg.steps();
  for (long s = 1; s <= steps; ++s) {
    stepper.step(state);
    // Use the exact grid time rather than the accumulated sum.
    state.t = s * cfg.dt;
    state.conv.t = state.t;
    if (s % cfg.record_every == 0 || s == steps) record();
  }
  return traj;
}

NoisePath make_noise_path(const LatticePtr& lattice, double dt, long steps, const NoiseStream& stream,
                          double delta) {
  if (!(dt > 0.0)) throw std::domain_error("make_noise_path: dt must be > 0");
  NoisePath path;
  path.lattice = lattice;
  path.dt = dt;
  path.z.reserve(static_cast<std::size_t>(steps) + 1);
  ConvolutionState conv(lattice);
  path.z.push_back(conv.z);
  for (long j = 0; j < steps; ++j) {
    ou_step(conv, dt, stream, delta);
    path.z.push_back(conv.z);
  }
  return path;
}

NonConvergenceError::NonConvergenceError(int iterations, double residual)
    : std::runtime_error("picard iteration did not converge after " + std::to_string(iterations) +
                         " iterations (last residual " + std::to_string(residual) + ")"),
      iterations_(iterations),
      residual_(residual) {}

PicardResult picard_solve(const SpectralField& u0, const NoisePath& path, const RegularizationProfile& profile,
                          double sigma, double delta, int n_grid, double tol, int max_iter, bool nonlinear) {
  if (!(tol > 0.0)) throw std::domain_error("picard_solve: tol must be > 0");
  if (max_iter < 1) throw std::domain_error("picard_solve: max_iter must be >= 1");
  const auto& lat = u0.lattice();
  if (lat != *path.lattice || lat != profile.lattice()) {
    throw std::invalid_argument("picard_solve: lattice mismatch");
  }
  require_resolution(lat, n_grid);
  const std::size_t J = path.steps();
  const EtdCoefficients coef(lat, path.dt, delta);

  // Linear part e^{t_j A} u0 + sigma Z_eps(t_j), fixed across iterations.
  std::vector<SpectralField> linear;
  linear.reserve(J + 1);
  {
    SpectralField free = u0;
    for (std::size_t j = 0; j <= J; ++j) {
      if (j > 0) {
        for (std::size_t i = 0; i < lat.size(); ++i) free[i] *= coef.decay[i];
      }
      SpectralField lin = free;
      for (std::size_t i = 0; i < lat.size(); ++i) lin[i] += sigma * profile[i] * path.z[j][i];
      linear.push_back(std::move(lin));
    }
  }

  std::vector<SpectralField> current = linear;
  PicardResult result;
  for (int it = 1; it <= max_iter; ++it) {
    std::vector<SpectralField> next;
    next.reserve(J + 1);
    SpectralField duhamel(u0.lattice_ptr());  // -int_0^{t_j} e^{(t_j - s)A} F(u(s)) ds
    for (std::size_t j = 0; j <= J; ++j) {
      if (j > 0 && nonlinear) {
        const SpectralField F = nonlinearity(current[j - 1], n_grid);
        for (std::size_t i = 0; i < lat.size(); ++i) {
          duhamel[i] = coef.decay[i] * duhamel[i] - coef.phi1[i] * F[i];
        }
      }
      next.push_back(linear[j] + duhamel);
    }
    double residual = 0.0;
    for (std::size_t j = 0; j <= J; ++j) {
      residual = std::max(residual, sobolev_norm(next[j] - current[j], 1.0));
    }
    result.residuals.push_back(residual);
    current = std::move(next);
    result.iterations = it;
    if (residual < tol) {
      for (std::size_t j = 0; j <= J; ++j) {
        result.trajectory.times.push_back(static_cast<double>(j) * path.dt);
        result.trajectory.snapshots.push_back(current[j]);
      }
      return result;
    }
  }
  throw NonConvergenceError(max_iter, result.residuals.back());
}

double contraction_constant(int n, double T) {
  if (n < 1) throw std::domain_error("contraction_constant: n must be >= 1");
  if (!(T > 0.0)) throw std::domain_error("contraction_constant: T must be > 0");
  // Gamma(1/2)^2 = pi; evaluate in log space so large n stays finite.
  const double log_value = std::log(2.0) + std::lgamma(1.5) +
                           0.5 * n * std::log(T * std::numbers::pi / (2.0 * std::numbers::e)) -
                           std::lgamma(0.5 * (n + 2));
  return std::exp(log_value);
}

}  // namespace surfgrow
