#include "surfgrow/transform.hpp"

#include <fftw3.h>

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace surfgrow {

namespace {

// FFTW planning touches global state.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Tap {
  int p;
  std::complex<double> weight;
};

// Exponential-basis taps of omega_m: omega_m(z) = sum_p weight * exp(i 2 pi p z / L).
int taps_of(int m, double length, std::array<Tap, 2>& out) {
  const double s = std::sqrt(2.0 / length);
  if (m == 0) {
    out[0] = {0, {1.0 / std::sqrt(length), 0.0}};
    return 1;
  }
  if (m > 0) {
    out[0] = {m, {0.0, -0.5 * s}};
    out[1] = {-m, {0.0, 0.5 * s}};
    return 2;
  }
  out[0] = {-m, {0.5 * s, 0.0}};
  out[1] = {m, {0.5 * s, 0.0}};
  return 2;
}

int wrap(int p, int n) { return ((p % n) + n) % n; }

}  // namespace

struct SpectralTransform::Plans {
  int n;
  int half;
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit Plans(int n_) : n(n_), half(n_ / 2 + 1) {
    const auto nn = static_cast<std::size_t>(n) * n;
    const auto nh = static_cast<std::size_t>(n) * half;
    std::lock_guard lock(planner_mutex());
    real = fftw_alloc_real(nn);
    spec = fftw_alloc_complex(nh);
    if (!real || !spec) throw std::bad_alloc();
    // ESTIMATE keeps the plan, and therefore the rounding, independent of timing.
    forward = fftw_plan_dft_r2c_2d(n, n, real, spec, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_2d(n, n, spec, real, FFTW_ESTIMATE);
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(spec);
  }

  std::complex<double>& at(int p1, int p2) {
    auto* c = reinterpret_cast<std::complex<double>*>(spec);
    return c[static_cast<std::size_t>(wrap(p1, n)) * half + p2];
  }
  // Full-spectrum lookup using Hermitian symmetry for negative p2.
  std::complex<double> full(int p1, int p2) {
    if (p2 >= 0) return at(p1, p2);
    return std::conj(at(-p1, -p2));
  }
};

SpectralTransform::SpectralTransform(int n) : n_(n) {
  if (n < 2) throw std::invalid_argument("SpectralTransform: resolution must be >= 2");
  plans_ = std::make_unique<Plans>(n);
}

SpectralTransform::~SpectralTransform() = default;

void SpectralTransform::synthesize(const SpectralField& u, std::span<double> values) {
  const auto& lat = u.lattice();
  require_resolution(lat, n_);
  if (values.size() != static_cast<std::size_t>(n_) * n_) {
    throw std::invalid_argument("synthesize: output size must be n*n");
  }
  auto& P = *plans_;
  std::fill_n(reinterpret_cast<double*>(P.spec), 2 * static_cast<std::size_t>(n_) * P.half, 0.0);
  std::array<Tap, 2> t1{}, t2{};
  const auto coeffs = u.coeffs();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const double c = coeffs[i];
    if (c == 0.0) continue;
    const Mode k = lat.mode(i);
    const int n1 = taps_of(k.k1, lat.length(), t1);
    const int n2 = taps_of(k.k2, lat.length(), t2);
    for (int a = 0; a < n1; ++a) {
      for (int b = 0; b < n2; ++b) {
        if (t2[b].p < 0) continue;
        P.at(t1[a].p, t2[b].p) += c * t1[a].weight * t2[b].weight;
      }
    }
  }
  fftw_execute(P.backward);
  std::copy_n(P.real, values.size(), values.begin());
}

void SpectralTransform::analyze(std::span<const double> values, SpectralField& u) {
  const auto& lat = u.lattice();
  require_resolution(lat, n_);
  if (values.size() != static_cast<std::size_t>(n_) * n_) {
    throw std::invalid_argument("analyze: input size must be n*n");
  }
  auto& P = *plans_;
  std::copy(values.begin(), values.end(), P.real);
  fftw_execute(P.forward);
  const double h = lat.length() / n_;
  const double w = h * h;
  std::array<Tap, 2> t1{}, t2{};
  auto coeffs = u.coeffs();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const Mode k = lat.mode(i);
    const int n1 = taps_of(k.k1, lat.length(), t1);
    const int n2 = taps_of(k.k2, lat.length(), t2);
    std::complex<double> acc{0.0, 0.0};
    for (int a = 0; a < n1; ++a) {
      for (int b = 0; b < n2; ++b) {
        acc += t1[a].weight * t2[b].weight * P.full(-t1[a].p, -t2[b].p);
      }
    }
    coeffs[i] = w * acc.real();
  }
}

SpectralTransform& transform_for(int n) {
  thread_local std::map<int, std::unique_ptr<SpectralTransform>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<SpectralTransform>(n);
  return *slot;
}

void require_resolution(const WavenumberLattice& lattice, int n) {
  if (n < 2 * lattice.truncation() + 2) {
    throw std::invalid_argument("grid resolution " + std::to_string(n) +
                                " aliases truncation N=" + std::to_string(lattice.truncation()) +
                                " (need n >= 2N+2)");
  }
}

PhysicalGrid to_physical(const SpectralField& u, int n) {
  require_resolution(u.lattice(), n);
  PhysicalGrid g(u.lattice().length(), n);
  transform_for(n).synthesize(u, g.values());
  return g;
}

SpectralField to_spectral(const PhysicalGrid& g, const LatticePtr& lattice) {
  if (std::abs(g.length() - lattice->length()) > 1e-12 * lattice->length()) {
    throw std::invalid_argument("to_spectral: grid and lattice side lengths differ");
  }
  SpectralField u(lattice);
  transform_for(g.n()).analyze(g.values(), u);
  return u;
}

double PhysicalGrid::mean() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

double PhysicalGrid::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool PhysicalGrid::is_mean_zero(double rel_tol) const {
  const double scale = max_abs();
  return std::abs(mean()) <= rel_tol * (scale > 0.0 ? scale : 1.0);
}

double PhysicalGrid::l2_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  const double h = spacing();
  return std::sqrt(s * h * h);
}

}  // namespace surfgrow
