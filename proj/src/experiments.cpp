#include "surfgrow/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "surfgrow/operators.hpp"
#include "surfgrow/transform.hpp"

namespace surfgrow {

namespace {

constexpr std::size_t kBlock = 8;  // samples per reduction block

std::vector<double> sorted_ladder(const StudyParams& study) {
  std::vector<double> eps = study.epsilons;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  return eps;
}

void require_ladder(const std::vector<double>& eps) {
  if (eps.size() < 2) throw std::invalid_argument("eps: a study needs at least two regularization scales");
  for (std::size_t i = 1; i < eps.size(); ++i) {
    if (eps[i] == eps[i - 1]) throw std::invalid_argument("eps: duplicate value in ladder");
  }
}

double eval_time(const SimulationConfig& cfg, const StudyParams& study) {
  return study.t_eval > 0.0 ? study.t_eval : cfg.T;
}

long steps_to(double t, double dt) { return std::lround(t / dt); }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void grad_on_grid(const SpectralField& u, int n, std::vector<double>& gx, std::vector<double>& gy) {
  const auto cells = static_cast<std::size_t>(n) * n;
  gx.resize(cells);
  gy.resize(cells);
  auto& tr = transform_for(n);
  tr.synthesize(partial_x(u), gx);
  tr.synthesize(partial_y(u), gy);
}

double sup_abs_on_grid(const SpectralField& u, int n) {
  return to_physical(u, n).max_abs();
}

double sup_grad_on_grid(const SpectralField& u, int n) {
  std::vector<double> gx, gy;
  grad_on_grid(u, n, gx, gy);
  double m = 0.0;
  for (std::size_t i = 0; i < gx.size(); ++i) m = std::max(m, std::hypot(gx[i], gy[i]));
  return m;
}

SimulationConfig config_for(const SimulationConfig& cfg, double epsilon, int N) {
  SimulationConfig c = cfg;
  c.epsilon = epsilon;
  c.N = N;
  c.n_grid = 4 * N;
  return c;
}

}  // namespace

bool all_passed(const std::vector<Gate>& gates) {
  return std::all_of(gates.begin(), gates.end(), [](const Gate& g) { return g.passed; });
}

int truncation_for(double epsilon, int base_N) {
  if (epsilon <= 0.0) return base_N;
  return std::max(base_N, 2 * static_cast<int>(std::ceil(1.0 / epsilon - 1e-12)));
}

std::uint64_t config_hash(const SimulationConfig& cfg, const StudyParams& study) {
  std::ostringstream os;
  os.precision(17);
  os << cfg.L << '|' << cfg.N << '|' << cfg.delta << '|' << cfg.sigma << '|' << to_string(cfg.profile) << '|'
     << cfg.epsilon << '|' << cfg.delta_eps << '|' << cfg.dt << '|' << cfg.T << '|' << cfg.seed << '|'
     << cfg.grid() << '|' << static_cast<int>(cfg.u0) << '|' << cfg.u0_amp << '|' << cfg.record_every;
  for (double e : study.epsilons) os << '|' << e;
  os << '|' << study.samples << '|' << study.t_eval << '|' << study.p << '|' << study.ucv_M << '|'
     << study.ucv_beta << '|' << study.bound_factor;
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : os.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Gate decreasing_trend_gate(const std::string& name, const std::vector<EnsemblePoint>& pts) {
  Gate g{name, true, ""};
  std::string trail;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    trail += (i ? " > " : "") + fmt(pts[i].mean);
    if (i > 0 && !(pts[i].mean < pts[i - 1].mean)) g.passed = false;
  }
  if (pts.size() >= 2) {
    const auto& a = pts.front();
    const auto& b = pts.back();
    const double combined = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
    const double sep = a.mean - b.mean;
    if (!(sep > 2.0 * combined)) g.passed = false;
    g.detail = trail + "; separation " + fmt(sep) + " vs 2 SE " + fmt(2.0 * combined);
  } else {
    g.passed = false;
    g.detail = "fewer than two points";
  }
  return g;
}

// ---------------------------------------------------------------------------

DecayStudy nonlinearity_decay_study(const SimulationConfig& cfg, const StudyParams& study) {
  cfg.validate();
  const auto ladder = sorted_ladder(study);
  require_ladder(ladder);
  const int M = study.samples > 0 ? study.samples : 400;
  if (M < 2) throw std::invalid_argument("samples: need at least 2");
  if (!(study.p > 1.0)) throw std::invalid_argument("p: must be > 1");
  const double t_eval = eval_time(cfg, study);
  if (t_eval < 0.0 || t_eval > cfg.T + 1e-12) throw std::invalid_argument("t_eval: must lie in [0, T]");
  const long steps = steps_to(t_eval, cfg.dt);

  DecayStudy out;
  out.sup_stats.t = out.lp_stats.t = t_eval;
  out.sup_stats.p = out.lp_stats.p = study.p;
  out.sup_stats.config_hash = out.lp_stats.config_hash = config_hash(cfg, study);

  for (double eps : ladder) {
    const int N = truncation_for(eps, cfg.N);
    const SimulationConfig c = config_for(cfg, eps, N);
    const int n = c.grid();
    const auto cells = static_cast<std::size_t>(n) * n;
    auto lattice = make_lattice(c.L, N);
    const auto profile = make_profile(c.profile, eps, c.delta_eps, lattice);
    const double h2 = (c.L / n) * (c.L / n);

    const std::size_t blocks = (static_cast<std::size_t>(M) + kBlock - 1) / kBlock;
    std::vector<std::vector<double>> block_sum(blocks), block_sq(blocks);
    std::vector<double> lp(static_cast<std::size_t>(M));

    parallel_for(blocks, study.workers, [&](std::size_t b) {
      auto& sum = block_sum[b];
      auto& sq = block_sq[b];
      sum.assign(cells, 0.0);
      sq.assign(cells, 0.0);
      std::vector<double> gx, gy;
      const std::size_t first = b * kBlock;
      const std::size_t last = std::min(first + kBlock, static_cast<std::size_t>(M));
      for (std::size_t s = first; s < last; ++s) {
        EtdStepper stepper(c, profile, NoiseStream(c.seed, s), c.dt);
        SolverState state(initial_condition(c, lattice, s), lattice);
        for (long j = 0; j < steps; ++j) stepper.step(state);
        grad_on_grid(state.u, n, gx, gy);
        double integral = 0.0;
        for (std::size_t i = 0; i < cells; ++i) {
          const Vec2 f = f_point({gx[i], gy[i]});
          const double mag = std::hypot(f[0], f[1]);
          const double v = study.p == 2.0 ? mag * mag : std::pow(mag, study.p);
          sum[i] += v;
          sq[i] += v * v;
          integral += v;
        }
        lp[s] = integral * h2;
      }
    });

    std::vector<double> sum(cells, 0.0), sq(cells, 0.0);
    for (std::size_t b = 0; b < blocks; ++b) {
      for (std::size_t i = 0; i < cells; ++i) {
        sum[i] += block_sum[b][i];
        sq[i] += block_sq[b][i];
      }
    }
    DecayRow row;
    row.epsilon = eps;
    row.N = N;
    std::size_t arg = 0;
    for (std::size_t i = 1; i < cells; ++i) {
      if (sum[i] > sum[arg]) arg = i;
    }
    const double mean = sum[arg] / M;
    const double var = std::max(0.0, (sq[arg] - M * mean * mean) / (M - 1));
    row.sup_pointwise = {eps, mean, var, std::sqrt(var / M), M};
    row.lp_moment = summarize(lp, eps);
    row.ucv_bound = t_eval > 0.0 ? ucv_upper_bound(profile, t_eval, study.p, study.ucv_M, study.ucv_beta, c.delta)
                                 : INFINITY;
    out.sup_stats.points.push_back(row.sup_pointwise);
    out.lp_stats.points.push_back(row.lp_moment);
    out.rows.push_back(row);
  }

  out.gates.push_back(decreasing_trend_gate("sup_pointwise_decreasing", out.sup_stats.points));
  out.gates.push_back(decreasing_trend_gate("lp_moment_decreasing", out.lp_stats.points));
  Gate ucv{"ucv_bound_decreasing", true, ""};
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    ucv.detail += (i ? " > " : "") + fmt(out.rows[i].ucv_bound);
    if (i > 0 && !(out.rows[i].ucv_bound < out.rows[i - 1].ucv_bound)) ucv.passed = false;
  }
  out.gates.push_back(ucv);
  return out;
}

// ---------------------------------------------------------------------------

ConvergenceStudy coupled_convergence_study(const SimulationConfig& cfg, const StudyParams& study) {
  cfg.validate();
  const auto ladder = sorted_ladder(study);
  require_ladder(ladder);
  const int M = study.samples > 0 ? study.samples : 200;
  if (M < 2) throw std::invalid_argument("samples: need at least 2");

  int N = cfg.N;
  for (double e : ladder) N = std::max(N, truncation_for(e, cfg.N));
  const SimulationConfig base = config_for(cfg, cfg.epsilon, N);
  const int n = base.grid();
  auto lattice = make_lattice(base.L, N);
  const auto identity = make_profile(ProfileKind::Identity, 0.0, base.delta_eps, lattice);
  std::vector<RegularizationProfile> profiles;
  for (double e : ladder) profiles.push_back(make_profile(base.profile, e, base.delta_eps, lattice));
  const long steps = base.steps();
  const std::size_t E = ladder.size();

  // per_sample[s][e] = {diff, v-k, z gap}
  std::vector<std::vector<std::array<double, 3>>> per_sample(static_cast<std::size_t>(M));

  parallel_for(static_cast<std::size_t>(M), study.workers, [&](std::size_t s) {
    const NoiseStream stream(base.seed, s);
    const SpectralField u0 = initial_condition(base, lattice, s);

    // Linear reference on the same noise, stored at record steps.
    std::vector<SpectralField> lin;
    std::vector<double> rec_t;
    {
      EtdStepper linear(base, identity, stream, base.dt, /*nonlinear=*/false);
      SolverState st(u0, lattice);
      lin.push_back(st.u);
      rec_t.push_back(0.0);
      for (long j = 1; j <= steps; ++j) {
        linear.step(st);
        if (j % base.record_every == 0 || j == steps) {
          lin.push_back(st.u);
          rec_t.push_back(j * base.dt);
        }
      }
    }

    auto& res = per_sample[s];
    res.assign(E, {0.0, 0.0, 0.0});
    for (std::size_t e = 0; e < E; ++e) {
      EtdStepper stepper(base, profiles[e], stream, base.dt);
      SolverState st(u0, lattice);
      std::size_t r = 0;
      auto measure = [&] {
        const SpectralField zeps = readout(st.conv, profiles[e], base.sigma);
        const SpectralField z = readout(st.conv, identity, base.sigma);
        const SpectralField k = semigroup_apply(u0, rec_t[r], base.delta);
        res[e][0] = std::max(res[e][0], sup_abs_on_grid(st.u - lin[r], n));
        res[e][1] = std::max(res[e][1], sup_abs_on_grid(st.u - zeps - k, n));
        res[e][2] = std::max(res[e][2], sup_abs_on_grid(zeps - z, n));
        ++r;
      };
      measure();
      for (long j = 1; j <= steps; ++j) {
        stepper.step(st);
        if (j % base.record_every == 0 || j == steps) measure();
      }
    }
  });

  ConvergenceStudy out;
  out.N = N;
  out.stats.t = base.T;
  out.stats.config_hash = config_hash(cfg, study);
  for (std::size_t e = 0; e < E; ++e) {
    std::vector<double> d(M), vk(M), zg(M);
    for (std::size_t s = 0; s < static_cast<std::size_t>(M); ++s) {
      d[s] = per_sample[s][e][0];
      vk[s] = per_sample[s][e][1];
      zg[s] = per_sample[s][e][2];
    }
    ConvergenceRow row;
    row.epsilon = ladder[e];
    row.diff = summarize(d, ladder[e]);
    row.v_minus_k = summarize(vk, ladder[e]);
    row.z_gap = summarize(zg, ladder[e]);
    out.stats.points.push_back(row.diff);
    out.rows.push_back(row);
  }
  Gate g{"sup_difference_decreasing", true, ""};
  for (std::size_t e = 0; e < E; ++e) {
    g.detail += (e ? " > " : "") + fmt(out.rows[e].diff.mean);
    if (e > 0 && !(out.rows[e].diff.mean < out.rows[e - 1].diff.mean)) g.passed = false;
  }
  out.gates.push_back(g);
  return out;
}

double coupling_control_discrepancy(const SimulationConfig& cfg, double epsilon, std::uint64_t sample) {
  cfg.validate();
  auto lattice = make_lattice(cfg.L, cfg.N);
  const auto identity = make_profile(ProfileKind::Identity, 0.0, cfg.delta_eps, lattice);
  const auto prof = make_profile(cfg.profile, epsilon, cfg.delta_eps, lattice);
  const NoiseStream stream(cfg.seed, sample);
  const SpectralField u0 = initial_condition(cfg, lattice, sample);
  EtdStepper lin(cfg, identity, stream, cfg.dt, false);
  EtdStepper reg(cfg, prof, stream, cfg.dt, false);
  SolverState a(u0, lattice), b(u0, lattice);
  double worst = 0.0;
  for (long j = 0; j < cfg.steps(); ++j) {
    lin.step(a);
    reg.step(b);
    const SpectralField zgap = readout(b.conv, prof, cfg.sigma) - readout(a.conv, identity, cfg.sigma);
    const SpectralField ugap = b.u - a.u;
    for (std::size_t i = 0; i < lattice->size(); ++i) worst = std::max(worst, std::abs(ugap[i] - zgap[i]));
  }
  return worst;
}

// ---------------------------------------------------------------------------

BoundStudy grad_v_bound_study(const SimulationConfig& cfg, const StudyParams& study) {
  cfg.validate();
  const auto ladder = sorted_ladder(study);
  require_ladder(ladder);
  const int M = study.samples > 0 ? study.samples : 50;
  if (M < 2) throw std::invalid_argument("samples: need at least 2");
  if (!(study.bound_factor > 1.0)) throw std::invalid_argument("bound_factor: must be > 1");

  BoundStudy out;
  for (double eps : ladder) {
    const int N = truncation_for(eps, cfg.N);
    const SimulationConfig c = config_for(cfg, eps, N);
    const int n = c.grid();
    auto lattice = make_lattice(c.L, N);
    const auto profile = make_profile(c.profile, eps, c.delta_eps, lattice);
    const long steps = c.steps();
    std::vector<double> gv(static_cast<std::size_t>(M)), gz(static_cast<std::size_t>(M));
    parallel_for(static_cast<std::size_t>(M), study.workers, [&](std::size_t s) {
      EtdStepper stepper(c, profile, NoiseStream(c.seed, s), c.dt);
      SolverState st(initial_condition(c, lattice, s), lattice);
      double mv = 0.0, mz = 0.0;
      auto measure = [&] {
        const SpectralField zeps = readout(st.conv, profile, c.sigma);
        mv = std::max(mv, sup_grad_on_grid(st.u - zeps, n));
        mz = std::max(mz, sup_grad_on_grid(zeps, n));
      };
      measure();
      for (long j = 1; j <= steps; ++j) {
        stepper.step(st);
        if (j % c.record_every == 0 || j == steps) measure();
      }
      gv[s] = mv;
      gz[s] = mz;
    });
    BoundRow row;
    row.epsilon = eps;
    row.N = N;
    row.max_grad_v = *std::max_element(gv.begin(), gv.end());
    row.max_grad_z = *std::max_element(gz.begin(), gz.end());
    row.per_sample_grad_v = summarize(gv, eps);
    row.per_sample_grad_z = summarize(gz, eps);
    out.rows.push_back(row);
  }

  double lo = INFINITY, hi = 0.0;
  std::string trail;
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    lo = std::min(lo, out.rows[i].max_grad_v);
    hi = std::max(hi, out.rows[i].max_grad_v);
    trail += (i ? ", " : "") + fmt(out.rows[i].max_grad_v);
  }
  const double ratio = lo > 0.0 ? hi / lo : (hi == 0.0 ? 1.0 : INFINITY);
  out.gates.push_back({"grad_v_uniform", ratio < study.bound_factor,
                       trail + "; max/min " + fmt(ratio) + " vs factor " + fmt(study.bound_factor)});
  Gate z{"grad_z_increasing", true, ""};
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    z.detail += (i ? " < " : "") + fmt(out.rows[i].max_grad_z);
    if (i > 0 && !(out.rows[i].max_grad_z > out.rows[i - 1].max_grad_z)) z.passed = false;
  }
  out.gates.push_back(z);
  return out;
}

// ---------------------------------------------------------------------------

MomentReport moment_validation_suite(const SimulationConfig& cfg, const StudyParams& study) {
  cfg.validate();
  const int M = study.samples > 0 ? study.samples : 10000;
  if (M < 2) throw std::invalid_argument("samples: need at least 2");
  const double t = study.t_eval > 0.0 ? study.t_eval : 0.1;
  const double sigma = cfg.sigma;
  const double s2 = sigma * sigma;
  const double delta = cfg.delta;
  auto lattice = make_lattice(cfg.L, cfg.N);
  const auto identity = make_profile(ProfileKind::Identity, 0.0, cfg.delta_eps, lattice);
  const auto prof = make_profile(cfg.profile, cfg.epsilon, cfg.delta_eps, lattice);
  const double x1 = cfg.L / 3.0, x2 = cfg.L / 7.0;

  struct Spec {
    std::string name;
    const RegularizationProfile* profile;
    double t;
    double alpha;
    double closed;
    std::function<double(std::uint64_t)> sample;
  };
  std::vector<Spec> specs;

  // Full-field sample of Z(t) for sample index s.
  auto field_at = [&](std::uint64_t s) { return sample_convolution(lattice, t, NoiseStream(cfg.seed, s), delta); };
  auto sobolev_sample = [&](const RegularizationProfile& p, double alpha) {
    return [&, alpha, pp = &p](std::uint64_t s) {
      const ConvolutionState z = field_at(s);
      const double nrm = sobolev_norm(readout(z, *pp, sigma), alpha);
      return nrm * nrm;
    };
  };
  specs.push_back({"l2_moment", &identity, t, 0.0, s2 * moment_l2(identity, t, delta), sobolev_sample(identity, 0.0)});
  specs.push_back({"l2_moment", &prof, t, 0.0, s2 * moment_l2(prof, t, delta), sobolev_sample(prof, 0.0)});
  specs.push_back({"h_alpha_moment", &identity, t, 0.5, s2 * moment_h_alpha(identity, t, 0.5, delta),
                   sobolev_sample(identity, 0.5)});
  specs.push_back({"h_alpha_moment", &prof, t, 0.5, s2 * moment_h_alpha(prof, t, 0.5, delta),
                   sobolev_sample(prof, 0.5)});
  specs.push_back({"h_alpha_moment", &prof, t, 1.0, s2 * moment_h_alpha(prof, t, 1.0, delta),
                   sobolev_sample(prof, 1.0)});
  specs.push_back({"coupling_l2", &prof, t, 0.0, s2 * coupling_moment_l2(prof, t, delta), [&](std::uint64_t s) {
                     const ConvolutionState z = field_at(s);
                     const double nrm = sobolev_norm(readout(z, identity, sigma) - readout(z, prof, sigma), 0.0);
                     return nrm * nrm;
                   }});
  specs.push_back({"pointwise_variance", &prof, t, 0.0, s2 * pointwise_variance(prof, t, x1, x2, delta),
                   [&](std::uint64_t s) {
                     const ConvolutionState z = field_at(s);
                     double v = 0.0;
                     for (std::size_t i = 0; i < lattice->size(); ++i) {
                       v += sigma * prof[i] * z.z[i] * basis_eval(lattice->mode(i), x1, x2, cfg.L);
                     }
                     return v * v;
                   }});

  const Mode k10{1, 0};
  const double t_ou = 0.5;
  const double mu10 = eigenvalue_mu(k10, cfg.L);
  specs.push_back({"ou_marginal_k(1,0)", &identity, t_ou, 0.0, s2 * ou_innovation_variance(mu10, t_ou, delta),
                   [&, mu10](std::uint64_t s) {
                     const double z = sigma * std::sqrt(ou_innovation_variance(mu10, t_ou, delta)) *
                                      NoiseStream(cfg.seed, s).gaussian(0, k10);
                     return z * z;
                   }});
  specs.push_back({"chapman_kolmogorov_k(1,0)", &identity, t_ou, 0.0,
                   s2 * ou_innovation_variance(mu10, t_ou, delta), [&, mu10](std::uint64_t s) {
                     const NoiseStream st(cfg.seed, s);
                     const double h = 0.5 * t_ou;
                     const double lam = delta * mu10 * mu10;
                     const double sd = std::sqrt(ou_innovation_variance(mu10, h, delta));
                     double z = sd * st.gaussian(0, k10);
                     z = std::exp(-lam * h) * z + sd * st.gaussian(1, k10);
                     return s2 * z * z;
                   }});

  struct Triple {
    Mode k;
    double s, t;
  };
  for (const Triple tr : {Triple{{1, 0}, 0.2, 0.5}, Triple{{2, 3}, 0.01, 0.02}, Triple{{1, 1}, 0.05, 0.2}}) {
    const double mu = eigenvalue_mu(tr.k, cfg.L);
    const std::string name = "increment_moment_k(" + std::to_string(tr.k.k1) + "," + std::to_string(tr.k.k2) +
                             ")_s" + fmt(tr.s);
    specs.push_back({name, &identity, tr.t, 0.0, s2 * ou_increment_second_moment(tr.k, cfg.L, tr.s, tr.t, delta),
                     [&, tr, mu](std::uint64_t s) {
                       const NoiseStream st(cfg.seed, s);
                       const double lam = delta * mu * mu;
                       const double zs = std::sqrt(ou_innovation_variance(mu, tr.s, delta)) * st.gaussian(0, tr.k);
                       const double zt = std::exp(-lam * (tr.t - tr.s)) * zs +
                                         std::sqrt(ou_innovation_variance(mu, tr.t - tr.s, delta)) *
                                             st.gaussian(1, tr.k);
                       return s2 * (zt - zs) * (zt - zs);
                     }});
  }

  MomentReport out;
  Gate all{"all_z_within_3", true, ""};
  for (const auto& sp : specs) {
    std::vector<double> vals(static_cast<std::size_t>(M));
    parallel_for(vals.size(), study.workers, [&](std::size_t s) { vals[s] = sp.sample(s); });
    MomentCheck c;
    c.name = sp.name;
    c.profile = sp.profile->kind();
    c.epsilon = sp.profile->epsilon();
    c.t = sp.t;
    c.alpha = sp.alpha;
    c.closed_form = sp.closed;
    c.mc = summarize(vals);
    c.z = z_score(c.mc.mean, c.closed_form, c.mc.std_error);
    c.passed = std::abs(c.z) <= 3.0;
    if (!c.passed) {
      all.passed = false;
      all.detail += (all.detail.empty() ? "" : "; ") + c.name + " z=" + fmt(c.z);
    }
    out.checks.push_back(std::move(c));
  }
  out.gates.push_back(all);
  return out;
}

// ---------------------------------------------------------------------------

AnalyticsTable analyze_ladder(const SimulationConfig& cfg, const StudyParams& study) {
  cfg.validate();
  auto ladder = sorted_ladder(study);
  if (ladder.empty()) throw std::invalid_argument("eps: empty ladder");
  AnalyticsTable out;
  out.t = eval_time(cfg, study);
  for (double eps : ladder) {
    const int N = truncation_for(eps, cfg.N);
    auto lattice = make_lattice(cfg.L, N);
    const auto prof = make_profile(cfg.profile, eps, cfg.delta_eps, lattice);
    const auto cov = grad_covariance(prof, out.t, cfg.delta);
    AnalyticsRow r;
    r.epsilon = eps;
    r.N = N;
    r.sigma11 = cov.matrix[0][0];
    r.sigma22 = cov.matrix[1][1];
    r.det = cov.det();
    r.k_eps = k_epsilon(prof, study.ucv_beta, study.ucv_M);
    r.ucv_bound = ucv_upper_bound(prof, out.t, study.p, study.ucv_M, study.ucv_beta, cfg.delta);
    r.moment_l2 = moment_l2(prof, out.t, cfg.delta);
    r.moment_h1 = moment_h_alpha(prof, out.t, 1.0, cfg.delta);
    out.rows.push_back(r);
  }
  Gate det{"det_nondecreasing", true, ""};
  Gate ucv{"ucv_bound_decreasing", true, ""};
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    det.detail += (i ? " <= " : "") + fmt(out.rows[i].det);
    ucv.detail += (i ? " > " : "") + fmt(out.rows[i].ucv_bound);
    if (i > 0 && out.rows[i].det < out.rows[i - 1].det) det.passed = false;
    if (i > 0 && !(out.rows[i].ucv_bound < out.rows[i - 1].ucv_bound)) ucv.passed = false;
  }
  out.gates.push_back(det);
  out.gates.push_back(ucv);
  return out;
}

}  // namespace surfgrow
