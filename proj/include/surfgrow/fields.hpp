#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "surfgrow/lattice.hpp"

namespace surfgrow {

using LatticePtr = std::shared_ptr<const WavenumberLattice>;

inline LatticePtr make_lattice(double length, int truncation) {
  return std::make_shared<const WavenumberLattice>(length, truncation);
}

/// Mean-zero real field in coefficient space: u = sum_k u_k e_k.
///
/// The lattice is shared and immutable, so fields copy cheaply and can be
/// handed between threads.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(LatticePtr lattice)
      : lattice_(std::move(lattice)), coeffs_(lattice_ ? lattice_->size() : 0, 0.0) {
    if (!lattice_) throw std::invalid_argument("SpectralField: null lattice");
  }
  SpectralField(LatticePtr lattice, std::vector<double> coeffs)
      : lattice_(std::move(lattice)), coeffs_(std::move(coeffs)) {
    if (!lattice_) throw std::invalid_argument("SpectralField: null lattice");
    if (coeffs_.size() != lattice_->size()) {
      throw std::invalid_argument("SpectralField: coefficient count does not match lattice");
    }
  }

  [[nodiscard]] const WavenumberLattice& lattice() const { return *lattice_; }
  [[nodiscard]] const LatticePtr& lattice_ptr() const { return lattice_; }
  [[nodiscard]] std::size_t size() const { return coeffs_.size(); }

  [[nodiscard]] std::span<double> coeffs() { return coeffs_; }
  [[nodiscard]] std::span<const double> coeffs() const { return coeffs_; }
  double& operator[](std::size_t i) { return coeffs_[i]; }
  double operator[](std::size_t i) const { return coeffs_[i]; }

  double& at(Mode k) { return coeffs_[lattice_->index_of(k)]; }
  [[nodiscard]] double at(Mode k) const { return coeffs_[lattice_->index_of(k)]; }

  SpectralField& operator+=(const SpectralField& other) {
    check_compatible(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& other) {
    check_compatible(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
  }
  SpectralField& operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
  }
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

  [[nodiscard]] bool same_lattice(const SpectralField& other) const {
    return lattice_ == other.lattice_ || (lattice_ && other.lattice_ && *lattice_ == *other.lattice_);
  }

 private:
  void check_compatible(const SpectralField& other) const {
    if (!same_lattice(other)) throw std::invalid_argument("SpectralField: lattice mismatch");
  }

  LatticePtr lattice_;
  std::vector<double> coeffs_;
};

/// Pair of spectral fields (first and second Cartesian component).
struct VectorField {
  SpectralField x;
  SpectralField y;
};

/// Samples on the n x n grid x_ij = (i L / n, j L / n), row-major in i.
class PhysicalGrid {
 public:
  PhysicalGrid(double length, int n) : length_(length), n_(n) {
    if (n < 1) throw std::invalid_argument("PhysicalGrid: resolution must be positive");
    values_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  }
  PhysicalGrid(double length, int n, std::vector<double> values)
      : length_(length), n_(n), values_(std::move(values)) {
    if (values_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
      throw std::invalid_argument("PhysicalGrid: value count must be n*n");
    }
  }

  [[nodiscard]] double length() const { return length_; }
  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] double spacing() const { return length_ / n_; }
  [[nodiscard]] std::span<double> values() { return values_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }

  double& operator()(int i, int j) { return values_[static_cast<std::size_t>(i) * n_ + j]; }
  double operator()(int i, int j) const { return values_[static_cast<std::size_t>(i) * n_ + j]; }

  [[nodiscard]] double mean() const;
  [[nodiscard]] double max_abs() const;
  /// Mean vanishes to 1e-10 relative to max |value|.
  [[nodiscard]] bool is_mean_zero(double rel_tol = 1e-10) const;
  /// Quadrature approximation of the L^2 norm on [0, L]^2.
  [[nodiscard]] double l2_norm() const;

 private:
  double length_;
  int n_;
  std::vector<double> values_;
};

}  // namespace surfgrow
