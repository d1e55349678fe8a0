#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "surfgrow/fields.hpp"

namespace surfgrow {

/// Synthesis and analysis between the real sin/cos basis and an n x n grid.
///
/// Owns FFTW plans and scratch buffers for one resolution. Not thread-safe;
/// give each worker its own instance, or use the free functions below which
/// keep a per-thread cache.
class SpectralTransform {
 public:
  explicit SpectralTransform(int n);
  ~SpectralTransform();
  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  [[nodiscard]] int n() const { return n_; }

  /// values[i * n + j] = sum_k u_k e_k(x_ij).
  void synthesize(const SpectralField& u, std::span<double> values);
  /// u_k = (L/n)^2 sum_ij g_ij e_k(x_ij); the mean is dropped.
  void analyze(std::span<const double> values, SpectralField& u);

 private:
  struct Plans;
  int n_;
  std::unique_ptr<Plans> plans_;
};

/// Per-thread transform for resolution n.
SpectralTransform& transform_for(int n);

/// Throws std::invalid_argument when n < 2N + 2.
void require_resolution(const WavenumberLattice& lattice, int n);

PhysicalGrid to_physical(const SpectralField& u, int n);
SpectralField to_spectral(const PhysicalGrid& g, const LatticePtr& lattice);

}  // namespace surfgrow
