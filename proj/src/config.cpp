#include "surfgrow/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace surfgrow {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad(const std::string& key, const std::string& why) { throw ConfigError(key + ": " + why); }

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end || !std::isfinite(out)) bad(key, "expected a number, got '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) bad(key, "expected an integer, got '" + v + "'");
  return out;
}

int to_small_int(const std::string& key, const std::string& v) {
  const long long x = to_int(key, v);
  if (x < -1000000000LL || x > 1000000000LL) bad(key, "out of range");
  return static_cast<int>(x);
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) bad(key, "expected an unsigned integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  bad(key, "expected a boolean, got '" + v + "'");
}

std::string normalize(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "L",       "N",          "delta",           "sigma",   "profile",      "eps",      "delta_eps", "dt",
      "T",       "seed",       "n_grid",          "picard_tol", "picard_max_iter", "u0", "u0_amp", "record_every",
      "samples", "t_eval",     "p",               "ucv_M",   "ucv_beta",     "bound_factor", "workers", "out",
      "pgm"};
  return keys;
}

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = normalize(raw_key);
  const std::string v = trim(raw_value);
  if (v.empty()) bad(key, "missing value");
  auto& s = cfg.sim;
  auto& st = cfg.study;
  if (key == "L") s.L = to_double(key, v);
  else if (key == "N") s.N = to_small_int(key, v);
  else if (key == "delta") s.delta = to_double(key, v);
  else if (key == "sigma") s.sigma = to_double(key, v);
  else if (key == "profile") {
    try {
      s.profile = parse_profile_kind(v);
    } catch (const std::exception&) {
      bad(key, "unknown profile '" + v + "'");
    }
  } else if (key == "eps") {
    std::vector<double> eps;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) eps.push_back(to_double(key, trim(item)));
    if (eps.empty()) bad(key, "empty list");
    st.epsilons = eps;
    s.epsilon = eps.front();
    cfg.eps_given = true;
  } else if (key == "delta_eps") s.delta_eps = to_double(key, v);
  else if (key == "dt") s.dt = to_double(key, v);
  else if (key == "T") s.T = to_double(key, v);
  else if (key == "seed") s.seed = to_u64(key, v);
  else if (key == "n_grid") s.n_grid = to_small_int(key, v);
  else if (key == "picard_tol") s.picard_tol = to_double(key, v);
  else if (key == "picard_max_iter") s.picard_max_iter = to_small_int(key, v);
  else if (key == "u0") {
    if (v == "zero") s.u0 = InitialCondition::Zero;
    else if (v == "random") s.u0 = InitialCondition::Random;
    else bad(key, "expected 'zero' or 'random', got '" + v + "'");
  } else if (key == "u0_amp") s.u0_amp = to_double(key, v);
  else if (key == "record_every") s.record_every = to_small_int(key, v);
  else if (key == "samples") st.samples = to_small_int(key, v);
  else if (key == "t_eval") st.t_eval = to_double(key, v);
  else if (key == "p") st.p = to_double(key, v);
  else if (key == "ucv_M") st.ucv_M = to_double(key, v);
  else if (key == "ucv_beta") st.ucv_beta = to_double(key, v);
  else if (key == "bound_factor") st.bound_factor = to_double(key, v);
  else if (key == "workers") st.workers = to_small_int(key, v);
  else if (key == "out") cfg.out_dir = v;
  else if (key == "pgm") cfg.pgm = to_bool(key, v);
  else throw ConfigError("unknown key '" + key + "'");
}

void parse_config_text(const std::string& text, RunConfig& cfg, const std::string& origin) {
  std::istringstream is(text);
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = origin + " line " + std::to_string(number);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": missing key");
    try {
      apply_setting(cfg, key, body.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
}

void parse_config_file(const std::filesystem::path& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  parse_config_text(ss.str(), cfg, path.string());
}

void validate(const RunConfig& cfg) {
  try {
    cfg.sim.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto& st = cfg.study;
  for (double e : st.epsilons) {
    if (!(e > 0.0)) bad("eps", "values must be > 0");
  }
  if (st.samples < 0) bad("samples", "must be >= 0");
  if (st.t_eval < 0.0 || st.t_eval > cfg.sim.T + 1e-12) bad("t_eval", "must lie in [0, T]");
  if (!(st.p > 1.0)) bad("p", "must be > 1");
  if (!(st.ucv_M > 0.0)) bad("ucv_M", "must be > 0");
  if (!(st.ucv_beta > 0.0 && st.ucv_beta < 1.0)) bad("ucv_beta", "must lie in (0, 1)");
  if (!(st.bound_factor > 1.0)) bad("bound_factor", "must be > 1");
  if (st.workers < 1) bad("workers", "must be >= 1");
}

std::vector<std::pair<std::string, std::string>> snapshot(const RunConfig& cfg) {
  const auto& s = cfg.sim;
  const auto& st = cfg.study;
  std::string eps;
  for (double e : st.epsilons) eps += (eps.empty() ? "" : ",") + format_number(e);
  return {{"L", format_number(s.L)},
          {"N", std::to_string(s.N)},
          {"delta", format_number(s.delta)},
          {"sigma", format_number(s.sigma)},
          {"profile", std::string(to_string(s.profile))},
          {"eps", eps},
          {"delta_eps", format_number(s.delta_eps)},
          {"dt", format_number(s.dt)},
          {"T", format_number(s.T)},
          {"seed", std::to_string(s.seed)},
          {"n_grid", std::to_string(s.grid())},
          {"picard_tol", format_number(s.picard_tol)},
          {"picard_max_iter", std::to_string(s.picard_max_iter)},
          {"u0", s.u0 == InitialCondition::Zero ? "zero" : "random"},
          {"u0_amp", format_number(s.u0_amp)},
          {"record_every", std::to_string(s.record_every)},
          {"samples", std::to_string(st.samples)},
          {"t_eval", format_number(st.t_eval)},
          {"p", format_number(st.p)},
          {"ucv_M", format_number(st.ucv_M)},
          {"ucv_beta", format_number(st.ucv_beta)},
          {"bound_factor", format_number(st.bound_factor)},
          {"pgm", cfg.pgm ? "true" : "false"}};
}

}  // namespace surfgrow
