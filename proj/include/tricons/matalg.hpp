#pragma once

// Symmetric spectral computations, positive-definiteness certificates for
// diagonal-minus-nonnegative matrices, Schur complements, and Metzler
// matrix classification. Everything is dense and double precision.

#include <optional>

#include "tricons/matrix.hpp"

namespace tricons {

struct SpectralSummary {
    Vec eigenvalues;        // sorted ascending
    Matrix eigenvectors;    // column j pairs with eigenvalues[j], orthonormal
    double zero_tol = 0.0;  // |lambda| < zero_tol counts as numerically zero
    int zero_multiplicity = 0;
    Matrix kernel_basis;    // n x zero_multiplicity, orthonormal
    double min_nonzero = 0.0;  // smallest eigenvalue above zero_tol; 0 if none

    double spectral_radius() const {
        double lo = eigenvalues.empty() ? 0.0 : eigenvalues.front();
        double hi = eigenvalues.empty() ? 0.0 : eigenvalues.back();
        return std::max(std::abs(lo), std::abs(hi));
    }
    bool psd(double tol) const { return eigenvalues.empty() || eigenvalues.front() >= -tol; }
};

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// The input must be symmetric to within 1e-9 relative tolerance; it is
/// symmetrized as (M + M^T)/2 before decomposition. Numerical zeros are
/// declared at |lambda| < 1e-8 * max(1, ||M||_2).
SpectralSummary eig_sym(const Matrix& m);

struct PdCertificate {
    bool positive_definite = false;
    std::optional<Vec> certificate;  // strictly positive v with (D-A)v >> 0
};

/// Tests positive definiteness of D - A for diagonal D (given as vector)
/// and symmetric nonnegative A, via Cholesky. On success the certificate
/// is (D-A)^(-1) * 1, which is strictly positive because the inverse is
/// nonnegative and nonsingular.
PdCertificate pd_certificate(const Vec& d, const Matrix& a);

/// (D - A)^(-1) for the same class of matrices; requires pd_certificate
/// to hold. The result is asserted symmetric with entries >= -1e-12.
Matrix nonneg_inverse(const Vec& d, const Matrix& a);

/// M22 - M21 M11^(-1) M12 where M11 is the leading head x head block,
/// which must be positive definite. The result is symmetrized.
Matrix schur_complement(const Matrix& m, std::size_t head);

struct MetzlerSummary {
    bool is_metzler = false;
    bool is_irreducible = false;
    double frobenius_eig = 0.0;  // max real part of the spectrum; valid when is_metzler
};

/// Classifies a square matrix: Metzler iff off-diagonal entries >= -1e-12;
/// irreducibility via strong connectivity of the off-diagonal support
/// (threshold 1e-12). The Frobenius eigenvalue is computed exactly for
/// symmetric inputs and by per-component Perron iteration otherwise.
MetzlerSummary metzler_summary(const Matrix& m);

// ---- Cholesky utilities (shared by the certificates above) ----

struct Cholesky {
    Matrix l;       // lower triangular factor
    bool ok = false;

    Vec solve(const Vec& b) const;
    Matrix solve(const Matrix& b) const;
    Matrix inverse() const;
};

/// LL^T factorization; ok=false when a pivot falls below
/// 1e-12 * max(1, max diagonal), i.e. the matrix is not numerically PD.
Cholesky cholesky(const Matrix& m);

} // namespace tricons
