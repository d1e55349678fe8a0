#pragma once

#include "surfgrow/fields.hpp"

namespace surfgrow {

/// Laplacian eigenvalue mu_k = (2 pi |k| / L)^2. The Bilaplacian eigenvalue is mu_k^2.
double eigenvalue_mu(Mode k, double length);

/// One-dimensional factor omega_m(z) of the tensor basis.
double basis_factor(int m, double z, double length);

/// e_k(x) = omega_{k1}(x1) omega_{k2}(x2), orthonormal in L^2([0, L]^2).
double basis_eval(Mode k, double x1, double x2, double length);

/// (sum_k mu_k^alpha u_k^2)^{1/2}.
double sobolev_norm(const SpectralField& u, double alpha);
/// Component-wise sum of squared norms, then square root.
double sobolev_norm(const VectorField& g, double alpha);

/// Multiplies every coefficient by mu_k^{alpha/2}.
SpectralField fractional_laplacian(const SpectralField& u, double alpha);

// Differentiation along axis i maps e_k to (2 pi k_i / L) e_{k'} where k' flips
// the sign of k_i (sine <-> cosine). This is exact on the truncated basis.
SpectralField partial_x(const SpectralField& u);
SpectralField partial_y(const SpectralField& u);

VectorField gradient(const SpectralField& u);
SpectralField divergence(const VectorField& g);

/// Spectral Laplacian: coefficients -mu_k u_k.
SpectralField laplacian(const SpectralField& u);

/// e^{tA} with A = -delta Delta^2: multipliers exp(-t delta mu_k^2).
SpectralField semigroup_apply(const SpectralField& u, double t, double delta = 1.0);

/// Operator-norm bound ||e^{tA}||_{H^alpha -> H^beta} <= ((beta-alpha)/(4e))^{(beta-alpha)/4} t^{(alpha-beta)/4}
/// for delta = 1.
double semigroup_norm_bound(double alpha, double beta, double t);

}  // namespace surfgrow
