#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "surfgrow/noise.hpp"
#include "surfgrow/operators.hpp"
#include "surfgrow/stats.hpp"

using namespace surfgrow;
using std::numbers::pi;
constexpr double kTwoPi = 2.0 * pi;

namespace {

double var_t(double mu, double t) { return (1.0 - std::exp(-2.0 * t * mu * mu)) / (2.0 * mu * mu); }

// omega_m(0)^2 for the sin/cos factors.
double omega0_sq(int m, double L) { return m > 0 ? 0.0 : (m == 0 ? 1.0 / L : 2.0 / L); }

}  // namespace

TEST_CASE("profiles") {
  auto lat = make_lattice(kTwoPi, 8);
  const auto id = make_profile(ProfileKind::Identity, 0.0, 2.0, lat);
  for (double a : id.values()) CHECK(a == 1.0);

  const auto sharp = make_profile(ProfileKind::SharpCutoff, 0.5, 2.0, lat);
  CHECK(sharp[lat->index_of({1, 0})] == 1.0);
  CHECK(sharp[lat->index_of({3, 0})] == 0.0);
  CHECK(sharp[lat->index_of({2, 0})] == 1.0);
  CHECK(RegularizationProfile::multiplier(ProfileKind::SmoothRational, 1.0, 2.0, 1.0) == doctest::Approx(0.5));
  CHECK(RegularizationProfile::multiplier(ProfileKind::Exponential, 0.5, 2.0, 2.0) == doctest::Approx(std::exp(-1.0)));
  CHECK_THROWS_AS(make_profile(ProfileKind::Exponential, -0.1, 2.0, lat), std::invalid_argument);
  CHECK_THROWS_AS(make_profile(ProfileKind::SmoothRational, 0.1, 0.0, lat), std::invalid_argument);
  CHECK(parse_profile_kind("smooth-rational") == ProfileKind::SmoothRational);
  CHECK_THROWS(parse_profile_kind("gaussian"));

  for (auto kind : {ProfileKind::SharpCutoff, ProfileKind::SmoothRational, ProfileKind::Exponential}) {
    const auto coarse = make_profile(kind, 0.5, 2.0, lat);
    const auto fine = make_profile(kind, 0.125, 2.0, lat);
    for (std::size_t i = 0; i < lat->size(); ++i) {
      CHECK(coarse[i] >= 0.0);
      CHECK(coarse[i] <= 1.0);
      CHECK(fine[i] >= coarse[i]);
      // radial: the swapped and sign-flipped modes agree
      const Mode k = lat->mode(i);
      CHECK(coarse[lat->index_of({k.k2, -k.k1})] == coarse[i]);
    }
  }
}

TEST_CASE("ou variance and stationarity") {
  const double mu = eigenvalue_mu({8, 8}, kTwoPi);
  CHECK(std::abs(ou_innovation_variance(mu, 1.0) - 1.0 / (2 * mu * mu)) <= 1e-12 / (2 * mu * mu));
  CHECK(ou_innovation_variance(1.0, 0.5) == doctest::Approx((1 - std::exp(-1.0)) / 2).epsilon(1e-15));
  CHECK(ou_innovation_variance(1.0, 0.5, 2.0) == doctest::Approx((1 - std::exp(-2.0)) / 4).epsilon(1e-15));

  auto lat = make_lattice(kTwoPi, 2);
  ConvolutionState st(lat);
  CHECK_THROWS_AS(ou_step(st, 0.0, NoiseStream(0, 0)), std::domain_error);
}

TEST_CASE("noise stream") {
  const NoiseStream a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  CHECK(a.gaussian(5, {1, 2}) == b.gaussian(5, {1, 2}));
  CHECK(a.gaussian(5, {1, 2}) != c.gaussian(5, {1, 2}));
  CHECK(a.gaussian(5, {1, 2}) != d.gaussian(5, {1, 2}));
  CHECK(a.gaussian(5, {1, 2}) != a.gaussian(6, {1, 2}));
  CHECK(a.gaussian(5, {1, 2}) != a.gaussian(5, {2, 1}));

  // Shared modes see identical values on different truncations.
  auto small = make_lattice(kTwoPi, 4), big = make_lattice(kTwoPi, 9);
  ConvolutionState s1(small), s2(big);
  for (int j = 0; j < 3; ++j) {
    ou_step(s1, 0.01, a);
    ou_step(s2, 0.01, a);
  }
  for (std::size_t i = 0; i < small->size(); ++i) CHECK(s1.z[i] == s2.z[big->index_of(small->mode(i))]);

  // Standard normal moments and mode independence.
  const int M = 200000;
  std::vector<double> x(M), y(M), xy(M);
  for (int i = 0; i < M; ++i) {
    x[i] = NoiseStream(1, i).gaussian(0, {1, 0});
    y[i] = NoiseStream(1, i).gaussian(0, {0, 1});
    xy[i] = x[i] * y[i];
  }
  const auto px = summarize(x), pxy = summarize(xy);
  CHECK(std::abs(px.mean) < 3 * px.std_error);
  CHECK(px.variance == doctest::Approx(1.0).epsilon(0.01));
  CHECK(std::abs(pxy.mean) < 3 * pxy.std_error);
}

TEST_CASE("readout") {
  auto lat = make_lattice(kTwoPi, 4);
  ConvolutionState st(lat);
  ou_step(st, 0.1, NoiseStream(0, 0));
  const auto sharp = make_profile(ProfileKind::SharpCutoff, 0.5, 2.0, lat);
  const SpectralField zero = readout(st, sharp, 0.0);
  for (double v : zero.coeffs()) CHECK(v == 0.0);
  const SpectralField r = readout(st, sharp, 2.0);
  const auto id = readout(st, make_profile(ProfileKind::Identity, 0, 2, lat), 1.0);
  for (std::size_t i = 0; i < lat->size(); ++i) {
    CHECK(id[i] == st.z[i]);
    CHECK(r[i] == (lat->mode(i).norm() > 2.0 ? 0.0 : 2.0 * st.z[i]));
  }
  auto other = make_lattice(kTwoPi, 5);
  CHECK_THROWS(readout(st, make_profile(ProfileKind::Identity, 0, 2, other), 1.0));
}

TEST_CASE("closed-form moments against direct sums") {
  const double L = kTwoPi;
  const int N = 16;
  auto lat = make_lattice(L, N);
  const auto id = make_profile(ProfileKind::Identity, 0, 2, lat);
  CHECK(moment_l2(id, 0.0) == 0.0);

  double stationary = 0.0;
  for (int a = -N; a <= N; ++a) {
    for (int b = -N; b <= N; ++b) {
      if (a == 0 && b == 0) continue;
      const double mu = a * a + b * b;  // L = 2 pi
      stationary += 1.0 / (2.0 * mu * mu);
    }
  }
  CHECK(std::abs(moment_l2(id, 1e3) - stationary) <= 1e-10 * stationary);

  const auto rat = make_profile(ProfileKind::SmoothRational, 0.2, 2.0, lat);
  double h_half = 0.0, coupling = 0.0;
  for (std::size_t i = 0; i < lat->size(); ++i) {
    const double mu = lat->mu(i), a = rat[i];
    h_half += a * a * var_t(mu, 0.3) / std::pow(mu, -0.5);
    coupling += (1 - a) * (1 - a) * var_t(mu, 0.3);
  }
  CHECK(moment_h_alpha(rat, 0.3, 0.5) == doctest::Approx(h_half).epsilon(1e-13));
  CHECK(coupling_moment_l2(rat, 0.3) == doctest::Approx(coupling).epsilon(1e-13));
  CHECK(moment_h_alpha(rat, 0.3, 0.0) == moment_l2(rat, 0.3));
  CHECK(coupling_moment_l2(id, 0.3) == 0.0);

  // Identity H^1 moment: N = 32 exceeds N = 16 by the new modes' partial sum.
  auto lat32 = make_lattice(L, 32);
  const auto id32 = make_profile(ProfileKind::Identity, 0, 2, lat32);
  const double t = 0.5;
  double extra = 0.0;
  for (std::size_t i = 0; i < lat32->size(); ++i) {
    const Mode k = lat32->mode(i);
    if (std::abs(k.k1) <= 16 && std::abs(k.k2) <= 16) continue;
    extra += lat32->mu(i) * var_t(lat32->mu(i), t);
  }
  const double gap = moment_h_alpha(id32, t, 1.0) - moment_h_alpha(id, t, 1.0);
  CHECK(gap > 0);
  CHECK(gap == doctest::Approx(extra).epsilon(1e-10));
  CHECK_THROWS(moment_l2(id, -1.0));
}

TEST_CASE("pointwise variance is x-independent") {
  const double L = kTwoPi;
  auto lat = make_lattice(L, 16);
  for (auto kind : {ProfileKind::Identity, ProfileKind::SharpCutoff, ProfileKind::Exponential}) {
    const auto prof = make_profile(kind, 0.2, 2.0, lat);
    const double v0 = pointwise_variance(prof, 0.5, 0, 0);
    double worst = 0.0;
    for (int i = 0; i < 32; ++i) {
      for (int j = 0; j < 32; ++j) {
        worst = std::max(worst, std::abs(pointwise_variance(prof, 0.5, i * L / 32, j * L / 32) - v0));
      }
    }
    CHECK(worst <= 1e-10 * v0);
    // Parseval: integral over the square of V equals the L2 moment.
    CHECK(v0 * L * L == doctest::Approx(moment_l2(prof, 0.5)).epsilon(1e-12));
  }
  CHECK(pointwise_variance(make_profile(ProfileKind::Identity, 0, 2, lat), 0.0, 1, 1) == 0.0);
}

TEST_CASE("sign orbit sums") {
  const double L = kTwoPi;
  const double a = sign_orbit_identity({1, 1}, 0, 0, L);
  CHECK(std::abs(sign_orbit_identity({1, 1}, 1, 2, L) - a) <= 1e-12);
  CHECK(a == doctest::Approx(4.0 / (L * L)).epsilon(1e-13));
  CHECK(sign_orbit_identity({3, -2}, 0.7, 2.1, 2.5) == doctest::Approx(4.0 / (2.5 * 2.5)).epsilon(1e-13));
  const double axis = sign_orbit_identity({1, 0}, 0, 0, L);
  CHECK(axis == doctest::Approx(2.0 / (L * L)).epsilon(1e-13));
  CHECK(std::abs(sign_orbit_identity({1, 0}, 2.2, 0.3, L) - axis) <= 1e-12);
  CHECK_THROWS(sign_orbit_identity({0, 0}, 0, 0, L));
}

TEST_CASE("increment second moment") {
  const double L = kTwoPi;
  CHECK(ou_increment_second_moment({1, 0}, L, 0.3, 0.3) == 0.0);
  // s = 0: the exact value is the marginal variance; the printed line is twice that.
  const double t = 0.5;
  CHECK(ou_increment_second_moment({2, 1}, L, 0, t) == doctest::Approx(var_t(5.0, t)).epsilon(1e-13));
  CHECK(ou_increment_bound({2, 1}, L, 0, t) == doctest::Approx((1 - std::exp(-2 * t * 25.0)) / 25.0).epsilon(1e-13));
  // Exact value from the OU covariance: Var Z(t) + Var Z(s) - 2 e^{-(t-s) lam} Var Z(s).
  const double s = 0.2, lam = 1.0;
  const double direct = var_t(1, t) + var_t(1, s) - 2 * std::exp(-(t - s) * lam) * var_t(1, s);
  CHECK(ou_increment_second_moment({1, 0}, L, s, t) == doctest::Approx(direct).epsilon(1e-13));
  CHECK_THROWS_AS(ou_increment_second_moment({1, 0}, L, 0.6, 0.5), std::domain_error);
}

TEST_CASE("gradient covariance") {
  const double L = kTwoPi;
  for (int N : {8, 16}) {
    auto lat = make_lattice(L, N);
    const auto prof = make_profile(ProfileKind::Exponential, 0.1, 2, lat);
    const auto zero = grad_covariance(prof, 0.0);
    CHECK(zero.matrix[0][0] == 0.0);
    CHECK(zero.det() == 0.0);
    const auto cov = grad_covariance(prof, 0.5);
    CHECK(cov.matrix[0][1] == 0.0);
    CHECK(cov.matrix[1][0] == 0.0);
    CHECK(std::abs(cov.matrix[0][0] - cov.matrix[1][1]) <= 1e-12 * cov.matrix[0][0]);

    // Direct double sum: d/dx1 e_k(0) = (2 pi k1 / L) omega_{-k1}(0) omega_{k2}(0).
    double s11 = 0.0;
    for (int a = -N; a <= N; ++a) {
      for (int b = -N; b <= N; ++b) {
        if (a == 0 && b == 0) continue;
        const double mu = std::pow(2 * pi / L, 2) * (a * a + b * b);
        const double alpha = std::exp(-0.1 * std::hypot(a, b));
        s11 += alpha * alpha * var_t(mu, 0.5) * std::pow(2 * pi * a / L, 2) * omega0_sq(-a, L) * omega0_sq(b, L);
      }
    }
    CHECK(std::abs(cov.det() - s11 * s11) <= 1e-10 * s11 * s11);
    CHECK(grad_covariance_det(prof, 0.5) == cov.det());
  }
  auto l16 = make_lattice(L, 16), l32 = make_lattice(L, 32);
  CHECK(grad_covariance_det(make_profile(ProfileKind::Identity, 0, 2, l32), 0.5) >
        grad_covariance_det(make_profile(ProfileKind::Identity, 0, 2, l16), 0.5));
  // det grows as eps shrinks.
  double prev = 0.0;
  for (double eps : {0.5, 0.25, 0.125, 0.0625}) {
    const double d = grad_covariance_det(make_profile(ProfileKind::SharpCutoff, eps, 2, l32), 0.5);
    CHECK(d >= prev);
    prev = d;
  }
}

TEST_CASE("K_eps and UCV bound") {
  CHECK(k_from_series(4.0, 0.5, 1.0) == doctest::Approx(2.0));
  CHECK(k_from_series(0.25, 0.5, 1.0) == 1.0);
  CHECK_THROWS_AS(k_from_series(4.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(k_from_series(4.0, 0.5, 0.0), std::domain_error);

  const double L = kTwoPi;
  auto l16 = make_lattice(L, 16), l32 = make_lattice(L, 32);
  const auto none = make_profile(ProfileKind::SharpCutoff, 10.0, 2, l16);
  CHECK(k_epsilon(none, 0.5, 1.0) == 1.0);

  double s16 = 0.0;
  for (int a = 1; a <= 16; ++a) {
    for (int b = -16; b <= -1; ++b) s16 += std::pow(double(a) / (a * a + b * b), 2);
  }
  const auto id16 = make_profile(ProfileKind::Identity, 0, 2, l16);
  const auto id32 = make_profile(ProfileKind::Identity, 0, 2, l32);
  CHECK(k_epsilon(id16, 0.5, 1e-3) == doctest::Approx(std::sqrt(s16)).epsilon(1e-13));
  CHECK(k_epsilon(id32, 0.5, 1e-3) > k_epsilon(id16, 0.5, 1e-3));

  CHECK(std::isinf(ucv_upper_bound(id16, 0.0, 2, 1, 0.25)));
  CHECK(ucv_upper_bound(id32, 0.5, 2, 1, 0.25) < ucv_upper_bound(id16, 0.5, 2, 1, 0.25));
  const double det = grad_covariance_det(id16, 0.5);
  const double K = k_epsilon(id16, 0.25, 1.0);
  CHECK(ucv_upper_bound(id16, 0.5, 2, 1, 0.25) ==
        doctest::Approx(std::pow(2 / K, 2) + 0.5 * K * K / std::sqrt(det)).epsilon(1e-13));
  CHECK_THROWS(ucv_upper_bound(id16, 0.5, 1.0, 1, 0.25));
}

TEST_CASE("sample_convolution marginal") {
  auto lat = make_lattice(kTwoPi, 2);
  const int M = 20000;
  std::vector<double> sq(M);
  const std::size_t i10 = lat->index_of({1, 0});
  for (int s = 0; s < M; ++s) {
    const auto st = sample_convolution(lat, 0.5, NoiseStream(9, s));
    sq[s] = st.z[i10] * st.z[i10];
  }
  const auto p = summarize(sq);
  CHECK(std::abs(z_score(p.mean, var_t(1.0, 0.5), p.std_error)) <= 3.0);
  CHECK(sample_convolution(lat, 0.0, NoiseStream(9, 0)).z[i10] == 0.0);
}
