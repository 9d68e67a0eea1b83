#include <algorithm>
#include <cmath>
#include <numeric>

#include "tricons/error.hpp"
#include "tricons/matalg.hpp"

namespace tricons {

namespace {

// One two-sided Jacobi rotation on rows/columns (p, q) of the symmetric
// matrix a, accumulated into vt (rows of vt are the eigenvector candidates).
void rotate(Matrix& a, Matrix& vt, std::size_t p, std::size_t q) {
    const std::size_t n = a.rows();
    const double app = a(p, p), aqq = a(q, q), apq = a(p, q);

    double t;
    const double diff = aqq - app;
    if (std::abs(apq) * 100.0 <= std::abs(diff) * 1e-14 && diff != 0.0) {
        t = apq / diff;
    } else {
        const double theta = diff / (2.0 * apq);
        t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta < 0.0) t = -t;
    }
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    // rows p and q in one pass; entries at columns p, q fixed up after
    kernels::rot(a.row(p), a.row(q), c, s, n);
    a(p, p) = app - t * apq;
    a(q, q) = aqq + t * apq;
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k == p || k == q) continue;
        a(k, p) = a(p, k);
        a(k, q) = a(q, k);
    }
    kernels::rot(vt.row(p), vt.row(q), c, s, n);
}

double offdiag_norm(const Matrix& a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) sum += a(i, j) * a(i, j);
    return std::sqrt(2.0 * sum);
}

} // namespace

SpectralSummary eig_sym(const Matrix& m) {
    if (m.rows() != m.cols()) throw Error("domain", "eig_sym: matrix not square");
    const std::size_t n = m.rows();

    const double scale = std::max(1.0, m.max_abs());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(m(i, j) - m(j, i)) > 1e-9 * scale)
                throw Error("domain", "eig_sym: matrix not symmetric within tolerance");

    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));

    Matrix vt = Matrix::identity(n);
    const double frob0 = std::max(a.frobenius(), 1e-300);
    for (int sweep = 0; sweep < 100; ++sweep) {
        if (offdiag_norm(a) <= 1e-15 * frob0) break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if (a(p, q) != 0.0) rotate(a, vt, p, q);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    SpectralSummary out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = a(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = vt(order[j], i);
    }

    out.zero_tol = 1e-8 * std::max(1.0, out.spectral_radius());
    for (double lam : out.eigenvalues)
        if (std::abs(lam) < out.zero_tol) ++out.zero_multiplicity;
    out.kernel_basis = Matrix(n, static_cast<std::size_t>(out.zero_multiplicity));
    std::size_t k = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(out.eigenvalues[j]) >= out.zero_tol) continue;
        for (std::size_t i = 0; i < n; ++i) out.kernel_basis(i, k) = out.eigenvectors(i, j);
        ++k;
    }
    out.min_nonzero = 0.0;
    for (double lam : out.eigenvalues)
        if (lam > out.zero_tol) { out.min_nonzero = lam; break; }
    return out;
}

} // namespace tricons
