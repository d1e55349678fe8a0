#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "surfgrow/solver.hpp"
#include "surfgrow/stats.hpp"

namespace surfgrow {

/// Ensemble-level parameters shared by the studies.
struct StudyParams {
  std::vector<double> epsilons{0.125};
  int samples = 0;  ///< 0 selects the per-study default
  double t_eval = 0.0;  ///< 0 selects T
  double p = 2.0;
  double ucv_M = 1.0;
  double ucv_beta = 0.25;
  double bound_factor = 2.0;
  int workers = 1;
};

struct Gate {
  std::string name;
  bool passed = false;
  std::string detail;
};

[[nodiscard]] bool all_passed(const std::vector<Gate>& gates);

/// Truncation used for regularization scale eps: max(N, 2 ceil(1/eps)), so a
/// sharp cutoff |k| <= 1/eps is fully resolved.
int truncation_for(double epsilon, int base_N);

/// Per-ensemble estimates keyed by an axis (eps).
struct EnsembleStats {
  std::string axis_name = "epsilon";
  std::vector<EnsemblePoint> points;
  double t = 0.0;
  double p = 0.0;
  std::uint64_t config_hash = 0;
};

/// Stable digest of the run parameters (for report metadata).
std::uint64_t config_hash(const SimulationConfig& cfg, const StudyParams& study);

/// Strictly decreasing means, and first - last > 2 sqrt(se_first^2 + se_last^2).
Gate decreasing_trend_gate(const std::string& name, const std::vector<EnsemblePoint>& pts);

// ---- nonlinearity decay ----

struct DecayRow {
  double epsilon = 0.0;
  int N = 0;
  EnsemblePoint sup_pointwise;  ///< max over grid of the pointwise mean of |f(grad u)|^p
  EnsemblePoint lp_moment;      ///< E ||f(grad u)||_{L^p}^p
  double ucv_bound = 0.0;
};

struct DecayStudy {
  std::vector<DecayRow> rows;
  EnsembleStats sup_stats;
  EnsembleStats lp_stats;
  std::vector<Gate> gates;
};

DecayStudy nonlinearity_decay_study(const SimulationConfig& cfg, const StudyParams& study);

// ---- coupled convergence ----

struct ConvergenceRow {
  double epsilon = 0.0;
  EnsemblePoint diff;       ///< E sup_{t,x} |u_eps - u_lin|
  EnsemblePoint v_minus_k;  ///< E sup |v_eps - e^{tA} u0|
  EnsemblePoint z_gap;      ///< E sup |Z_eps - Z| (sigma scaled)
};

struct ConvergenceStudy {
  int N = 0;
  std::vector<ConvergenceRow> rows;
  EnsembleStats stats;
  std::vector<Gate> gates;
};

ConvergenceStudy coupled_convergence_study(const SimulationConfig& cfg, const StudyParams& study);

/// Largest |(u_eps - u_lin) - (Z_eps - Z)| over modes and steps with the nonlinearity disabled.
double coupling_control_discrepancy(const SimulationConfig& cfg, double epsilon, std::uint64_t sample = 0);

// ---- uniform gradient bound ----

struct BoundRow {
  double epsilon = 0.0;
  int N = 0;
  double max_grad_v = 0.0;  ///< max over samples, record times and grid
  double max_grad_z = 0.0;
  EnsemblePoint per_sample_grad_v;
  EnsemblePoint per_sample_grad_z;
};

struct BoundStudy {
  std::vector<BoundRow> rows;
  std::vector<Gate> gates;
};

BoundStudy grad_v_bound_study(const SimulationConfig& cfg, const StudyParams& study);

// ---- closed form vs Monte Carlo ----

struct MomentCheck {
  std::string name;
  ProfileKind profile = ProfileKind::Identity;
  double epsilon = 0.0;
  double t = 0.0;
  double alpha = 0.0;
  double closed_form = 0.0;
  EnsemblePoint mc;
  double z = 0.0;
  bool passed = false;
};

struct MomentReport {
  std::vector<MomentCheck> checks;
  std::vector<Gate> gates;
};

MomentReport moment_validation_suite(const SimulationConfig& cfg, const StudyParams& study);

// ---- closed-form analytics across eps ----

struct AnalyticsRow {
  double epsilon = 0.0;
  int N = 0;
  double sigma11 = 0.0;
  double sigma22 = 0.0;
  double det = 0.0;
  double k_eps = 0.0;
  double ucv_bound = 0.0;
  double moment_l2 = 0.0;
  double moment_h1 = 0.0;
};

struct AnalyticsTable {
  double t = 0.0;
  std::vector<AnalyticsRow> rows;
  std::vector<Gate> gates;
};

AnalyticsTable analyze_ladder(const SimulationConfig& cfg, const StudyParams& study);

}  // namespace surfgrow
