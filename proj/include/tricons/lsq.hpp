#pragma once

// Rank-revealing QR, null spaces, and the small constrained least-squares
// solvers (NNLS, LDP) used for sign-constrained null vector selection.

#include <optional>

#include "tricons/matrix.hpp"

namespace tricons {

struct PivotedQr {
    Matrix q;                 // m x m orthogonal
    Matrix r;                 // m x n upper triangular (of the permuted input)
    std::vector<std::size_t> pivot;  // column permutation
    std::size_t rank = 0;     // |r(k,k)| > rel_tol * |r(0,0)|
};

/// Householder QR with column pivoting.
PivotedQr qr_pivoted(const Matrix& a, double rel_tol = 1e-9);

/// Numerical rank via pivoted QR.
std::size_t numerical_rank(const Matrix& a, double rel_tol = 1e-9);

/// Orthonormal basis of the null space of `a` (n x k with k = n - rank),
/// taken from the trailing Q columns of a pivoted QR of a^T.
Matrix nullspace(const Matrix& a, double rel_tol = 1e-9);

/// Lawson-Hanson nonnegative least squares: minimizes ||e*x - f|| over x >= 0.
Vec nnls(const Matrix& e, const Vec& f);

/// Least-distance programming: minimizes ||x|| subject to g*x >= h.
/// Returns nullopt when the constraint set is empty.
std::optional<Vec> ldp(const Matrix& g, const Vec& h);

} // namespace tricons
