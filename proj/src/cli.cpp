#include "surfgrow/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <map>
#include <ostream>

#include "surfgrow/config.hpp"
#include "surfgrow/experiments.hpp"
#include "surfgrow/field_io.hpp"
#include "surfgrow/report.hpp"
#include "surfgrow/transform.hpp"

namespace surfgrow {

namespace {

using report::CsvTable;
using report::KeyValues;
using report::OutputSet;

std::string num(double v) { return format_number(v); }

std::string hex64(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void add_point(std::vector<std::string>& row, const EnsemblePoint& p) {
  row.push_back(num(p.mean));
  row.push_back(num(p.variance));
  row.push_back(num(p.std_error));
}

void add_gates(KeyValues& kv, const std::vector<Gate>& gates) {
  for (const auto& g : gates) {
    kv.emplace_back("gate." + g.name, g.passed ? "pass" : "fail");
    kv.emplace_back("gate." + g.name + ".detail", g.detail);
  }
}

int finish(OutputSet& set, const std::string& command, const RunConfig& cfg, KeyValues summary,
           const std::vector<Gate>& gates, const std::string& started, std::ostream& out) {
  const bool ok = all_passed(gates);
  summary.insert(summary.begin(), {"status", ok ? "pass" : "fail"});
  summary.insert(summary.begin(), {"command", command});
  add_gates(summary, gates);
  set.write_text("summary.txt", report::key_values(summary));
  set.write_manifest(command, snapshot(cfg), kVersion, cfg.sim.seed, started);
  for (const auto& g : gates) out << (g.passed ? "PASS " : "FAIL ") << g.name << ": " << g.detail << "\n";
  out << command << ": " << (ok ? "ok" : "gate failure") << ", outputs in " << set.dir().string() << "\n";
  return ok ? kExitOk : kExitGateFailed;
}

StudyParams study_for(const RunConfig& cfg) {
  StudyParams st = cfg.study;
  if (!cfg.eps_given) st.epsilons = kDefaultLadder;
  return st;
}

std::string snapshot_name(std::size_t i, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%04zu.%s", i, ext);
  return buf;
}

int cmd_simulate(const RunConfig& cfg, OutputSet& set, const std::string& started, std::ostream& out) {
  const Trajectory traj = simulate(cfg.sim);
  CsvTable table({"t", "energy", "l2_norm", "h1_norm", "f_l2", "sup_grad_v"});
  for (const auto& d : traj.diagnostics) {
    table.add_row({num(d.t), num(d.energy), num(d.l2_norm), num(d.h1_norm), num(d.f_l2), num(d.sup_grad_v)});
  }
  set.write_text("diagnostics.csv", table.str());
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const auto name = snapshot_name(i, "spf");
    io::save_field(set.path(name), traj.snapshots[i]);
    set.add(name);
  }
  const PhysicalGrid final_grid = to_physical(traj.snapshots.back(), cfg.sim.grid());
  io::save_grid(set.path("final.grd"), final_grid);
  set.add("final.grd");
  if (cfg.pgm) {
    io::save_pgm(set.path("final.pgm"), final_grid);
    set.add("final.pgm");
  }
  std::vector<Gate> gates;
  bool finite = true;
  for (const auto& d : traj.diagnostics) finite = finite && std::isfinite(d.energy) && std::isfinite(d.h1_norm);
  gates.push_back({"finite_diagnostics", finite, std::to_string(traj.diagnostics.size()) + " records"});
  const auto& last = traj.diagnostics.back();
  KeyValues summary{{"records", std::to_string(traj.diagnostics.size())},
                    {"final_t", num(last.t)},
                    {"final_energy", num(last.energy)},
                    {"final_h1_norm", num(last.h1_norm)},
                    {"final_sup_grad_v", num(last.sup_grad_v)}};
  return finish(set, "simulate", cfg, summary, gates, started, out);
}

int cmd_moments(const RunConfig& cfg, OutputSet& set, const std::string& started, std::ostream& out) {
  const MomentReport rep = moment_validation_suite(cfg.sim, cfg.study);
  CsvTable table({"profile_kind", "epsilon", "t", "alpha", "closed_form", "mc_estimate", "mc_stderr", "n_samples",
                  "check", "z"});
  for (const auto& c : rep.checks) {
    table.add_row({std::string(to_string(c.profile)), num(c.epsilon), num(c.t), num(c.alpha), num(c.closed_form),
                   num(c.mc.mean), num(c.mc.std_error), std::to_string(c.mc.count), c.name, num(c.z)});
  }
  set.write_text("moments.csv", table.str());
  double worst = 0.0;
  for (const auto& c : rep.checks) worst = std::max(worst, std::abs(c.z));
  KeyValues summary{{"checks", std::to_string(rep.checks.size())}, {"max_abs_z", num(worst)}};
  return finish(set, "moments", cfg, summary, rep.gates, started, out);
}

int cmd_decay(const RunConfig& cfg, OutputSet& set, const std::string& started, std::ostream& out) {
  const StudyParams st = study_for(cfg);
  const DecayStudy study = nonlinearity_decay_study(cfg.sim, st);
  CsvTable table({"epsilon", "N", "sup_mean", "sup_variance", "sup_stderr", "lp_mean", "lp_variance", "lp_stderr",
                  "n_samples", "ucv_bound"});
  for (const auto& r : study.rows) {
    std::vector<std::string> row{num(r.epsilon), std::to_string(r.N)};
    add_point(row, r.sup_pointwise);
    add_point(row, r.lp_moment);
    row.push_back(std::to_string(r.lp_moment.count));
    row.push_back(num(r.ucv_bound));
    table.add_row(row);
  }
  set.write_text("decay.csv", table.str());
  KeyValues summary{{"t_eval", num(study.lp_stats.t)},
                    {"p", num(study.lp_stats.p)},
                    {"config_hash", hex64(study.lp_stats.config_hash)}};
  return finish(set, "decay", cfg, summary, study.gates, started, out);
}

int cmd_converge(const RunConfig& cfg, OutputSet& set, const std::string& started, std::ostream& out) {
  const StudyParams st = study_for(cfg);
  const ConvergenceStudy study = coupled_convergence_study(cfg.sim, st);
  CsvTable table({"epsilon", "N", "diff_mean", "diff_variance", "diff_stderr", "v_minus_k_mean",
                  "v_minus_k_variance", "v_minus_k_stderr", "z_gap_mean", "z_gap_variance", "z_gap_stderr",
                  "n_samples"});
  for (const auto& r : study.rows) {
    std::vector<std::string> row{num(r.epsilon), std::to_string(study.N)};
    add_point(row, r.diff);
    add_point(row, r.v_minus_k);
    add_point(row, r.z_gap);
    row.push_back(std::to_string(r.diff.count));
    table.add_row(row);
  }
  set.write_text("converge.csv", table.str());
  const double control = coupling_control_discrepancy(cfg.sim, st.epsilons.back());
  std::vector<Gate> gates = study.gates;
  gates.push_back({"coupling_control_exact", control == 0.0, "max discrepancy " + num(control)});
  KeyValues summary{{"N", std::to_string(study.N)}, {"config_hash", hex64(study.stats.config_hash)}};
  return finish(set, "converge", cfg, summary, gates, started, out);
}

int cmd_bound(const RunConfig& cfg, OutputSet& set, const std::string& started, std::ostream& out) {
  const StudyParams st = study_for(cfg);
  const BoundStudy study = grad_v_bound_study(cfg.sim, st);
  CsvTable table({"epsilon", "N", "max_grad_v", "max_grad_z", "grad_v_mean", "grad_v_stderr", "grad_z_mean",
                  "grad_z_stderr", "n_samples"});
  for (const auto& r : study.rows) {
    table.add_row({num(r.epsilon), std::to_string(r.N), num(r.max_grad_v), num(r.max_grad_z),
                   num(r.per_sample_grad_v.mean), num(r.per_sample_grad_v.std_error),
                   num(r.per_sample_grad_z.mean), num(r.per_sample_grad_z.std_error),
                   std::to_string(r.per_sample_grad_v.count)});
  }
  set.write_text("bound.csv", table.str());
  KeyValues summary{{"config_hash", hex64(config_hash(cfg.sim, st))}};
  return finish(set, "bound", cfg, summary, study.gates, started, out);
}

int cmd_analyze(const RunConfig& cfg, OutputSet& set, const std::string& started, std::ostream& out) {
  const StudyParams st = study_for(cfg);
  const AnalyticsTable tab = analyze_ladder(cfg.sim, st);
  CsvTable table({"epsilon", "N", "sigma11", "sigma22", "det", "k_eps", "ucv_bound", "moment_l2", "moment_h1"});
  for (const auto& r : tab.rows) {
    table.add_row({num(r.epsilon), std::to_string(r.N), num(r.sigma11), num(r.sigma22), num(r.det), num(r.k_eps),
                   num(r.ucv_bound), num(r.moment_l2), num(r.moment_h1)});
  }
  set.write_text("analyze.csv", table.str());
  KeyValues summary{{"t", num(tab.t)}};
  return finish(set, "analyze", cfg, summary, tab.gates, started, out);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pseudospectral solver and Monte Carlo studies for a stochastic surface growth equation", "surfgrow"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "flat key = value config file");
  std::map<std::string, std::string> flags;
  for (const auto& key : config_keys()) {
    std::string name = "--" + key;
    std::string dashed = key;
    std::replace(dashed.begin(), dashed.end(), '_', '-');
    if (dashed != key) name += ",--" + dashed;
    app.add_option(name, flags[key], "override '" + key + "'");
  }

  static const std::vector<std::pair<std::string, std::string>> commands{
      {"simulate", "one trajectory with diagnostics CSV and snapshots"},
      {"moments", "closed-form vs Monte Carlo moment table"},
      {"decay", "nonlinearity decay study across eps"},
      {"converge", "coupled convergence to the linear equation"},
      {"bound", "uniform gradient bound study"},
      {"analyze", "covariance, K_eps and UCV bound table across eps"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  if (!argv_rev.empty()) argv_rev.pop_back();
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    RunConfig cfg;
    if (!config_path.empty()) parse_config_file(config_path, cfg);
    for (const auto& key : config_keys()) {
      if (app.get_option("--" + key)->count() > 0) apply_setting(cfg, key, flags[key]);
    }
    validate(cfg);

    const std::string started = report::utc_now();
    OutputSet set(cfg.out_dir);
    if (command == "simulate") return cmd_simulate(cfg, set, started, out);
    if (command == "moments") return cmd_moments(cfg, set, started, out);
    if (command == "decay") return cmd_decay(cfg, set, started, out);
    if (command == "converge") return cmd_converge(cfg, set, started, out);
    if (command == "bound") return cmd_bound(cfg, set, started, out);
    return cmd_analyze(cfg, set, started, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace surfgrow
