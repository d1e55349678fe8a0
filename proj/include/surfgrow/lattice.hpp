#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace surfgrow {

/// Wavenumber k = (k1, k2) of the real sin/cos tensor basis.
/// Positive components select sine factors, negative ones cosine factors.
struct Mode {
  int k1 = 0;
  int k2 = 0;

  [[nodiscard]] int norm_squared() const { return k1 * k1 + k2 * k2; }
  [[nodiscard]] double norm() const { return std::sqrt(static_cast<double>(norm_squared())); }
  [[nodiscard]] bool is_zero() const { return k1 == 0 && k2 == 0; }

  friend bool operator==(const Mode&, const Mode&) = default;
};

/// Square truncation |k1|, |k2| <= N of Z^2 \ {0} on the torus [0, L]^2.
///
/// Modes are enumerated lexicographically on (k1, k2); the zero mode is
/// skipped. The ordering is part of the binary dump format.
class WavenumberLattice {
 public:
  WavenumberLattice(double length, int truncation) : length_(length), truncation_(truncation) {
    if (!(length > 0.0) || !std::isfinite(length)) {
      throw std::invalid_argument("lattice: side length must be positive and finite");
    }
    if (truncation < 1) {
      throw std::invalid_argument("lattice: truncation N must be >= 1");
    }
    const int side = 2 * truncation + 1;
    modes_.reserve(static_cast<std::size_t>(side * side - 1));
    mu_.reserve(modes_.capacity());
    const double scale = 2.0 * std::numbers::pi / length;
    for (int k1 = -truncation; k1 <= truncation; ++k1) {
      for (int k2 = -truncation; k2 <= truncation; ++k2) {
        if (k1 == 0 && k2 == 0) continue;
        modes_.push_back({k1, k2});
        mu_.push_back(scale * scale * (k1 * k1 + k2 * k2));
      }
    }
  }

  [[nodiscard]] double length() const { return length_; }
  [[nodiscard]] int truncation() const { return truncation_; }
  [[nodiscard]] std::size_t size() const { return modes_.size(); }
  [[nodiscard]] const std::vector<Mode>& modes() const { return modes_; }
  [[nodiscard]] const Mode& mode(std::size_t i) const { return modes_[i]; }

  /// Laplacian eigenvalue mu_k = (2 pi |k| / L)^2 of mode i.
  [[nodiscard]] double mu(std::size_t i) const { return mu_[i]; }
  [[nodiscard]] const std::vector<double>& mu() const { return mu_; }

  [[nodiscard]] bool contains(Mode k) const {
    return !k.is_zero() && std::abs(k.k1) <= truncation_ && std::abs(k.k2) <= truncation_;
  }

  /// Position of k in the enumeration; k must be contained in the lattice.
  [[nodiscard]] std::size_t index_of(Mode k) const {
    if (!contains(k)) throw std::out_of_range("lattice: mode outside truncation");
    const int side = 2 * truncation_ + 1;
    const auto raw = static_cast<std::size_t>((k.k1 + truncation_) * side + (k.k2 + truncation_));
    const auto zero = static_cast<std::size_t>(truncation_ * side + truncation_);
    return raw > zero ? raw - 1 : raw;
  }

  friend bool operator==(const WavenumberLattice& a, const WavenumberLattice& b) {
    return a.length_ == b.length_ && a.truncation_ == b.truncation_;
  }

 private:
  double length_;
  int truncation_;
  std::vector<Mode> modes_;
  std::vector<double> mu_;
};

}  // namespace surfgrow
