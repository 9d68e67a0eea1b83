#include <algorithm>
#include <cmath>
#include <numeric>

#include "tricons/error.hpp"
#include "tricons/lsq.hpp"
#include "tricons/matalg.hpp"

namespace tricons {

PivotedQr qr_pivoted(const Matrix& a, double rel_tol) {
    const std::size_t m = a.rows(), n = a.cols();
    PivotedQr out;
    out.r = a;
    out.q = Matrix::identity(m);
    out.pivot.resize(n);
    std::iota(out.pivot.begin(), out.pivot.end(), 0);

    Vec colnorm(n, 0.0);
    auto column_norm = [&](std::size_t j, std::size_t from) {
        double s = 0.0;
        for (std::size_t i = from; i < m; ++i) s += out.r(i, j) * out.r(i, j);
        return std::sqrt(s);
    };

    const std::size_t steps = std::min(m, n);
    Vec v(m);
    for (std::size_t k = 0; k < steps; ++k) {
        // move the column with the largest remaining norm into position k
        std::size_t best = k;
        double best_norm = column_norm(k, k);
        for (std::size_t j = k + 1; j < n; ++j) {
            const double nj = column_norm(j, k);
            if (nj > best_norm) { best = j; best_norm = nj; }
        }
        if (best != k) {
            for (std::size_t i = 0; i < m; ++i) std::swap(out.r(i, k), out.r(i, best));
            std::swap(out.pivot[k], out.pivot[best]);
        }
        if (best_norm == 0.0) break;

        // Householder reflector for column k below the diagonal
        double alpha = best_norm;
        if (out.r(k, k) > 0.0) alpha = -alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = k; i < m; ++i) {
            v[i] = out.r(i, k) - (i == k ? alpha : 0.0);
            vnorm2 += v[i] * v[i];
        }
        if (vnorm2 == 0.0) continue;

        auto apply = [&](Matrix& t) {
            for (std::size_t j = 0; j < t.cols(); ++j) {
                double proj = 0.0;
                for (std::size_t i = k; i < m; ++i) proj += v[i] * t(i, j);
                proj *= 2.0 / vnorm2;
                for (std::size_t i = k; i < m; ++i) t(i, j) -= proj * v[i];
            }
        };
        apply(out.r);
        apply(out.q);
        out.r(k, k) = alpha;
        for (std::size_t i = k + 1; i < m; ++i) out.r(i, k) = 0.0;
    }
    // accumulated q holds Q^T so far; transpose once
    out.q = out.q.transposed();

    const double r00 = std::abs(out.r(0, 0));
    for (std::size_t k = 0; k < steps; ++k)
        if (std::abs(out.r(k, k)) > rel_tol * std::max(r00, 1e-300)) ++out.rank;
    return out;
}

std::size_t numerical_rank(const Matrix& a, double rel_tol) {
    return qr_pivoted(a, rel_tol).rank;
}

Matrix nullspace(const Matrix& a, double rel_tol) {
    const PivotedQr qr = qr_pivoted(a.transposed(), rel_tol);
    const std::size_t n = a.cols();
    const std::size_t k = n - qr.rank;
    Matrix basis(n, k);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i) basis(i, j) = qr.q(i, qr.rank + j);
    return basis;
}

Vec nnls(const Matrix& e, const Vec& f) {
    const std::size_t m = e.rows(), n = e.cols();
    if (f.size() != m) throw Error("domain", "nnls dimension mismatch");

    Vec x(n, 0.0);
    std::vector<bool> passive(n, false);
    Vec resid = f;  // f - e*x, x = 0 initially

    auto gradient = [&] {
        Vec w(n);
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) s += e(i, j) * resid[i];
            w[j] = s;
        }
        return w;
    };
    auto solve_passive = [&](Vec& z) {
        std::vector<std::size_t> idx;
        for (std::size_t j = 0; j < n; ++j)
            if (passive[j]) idx.push_back(j);
        // normal equations on the passive set; the sets stay tiny here
        Matrix g(idx.size(), idx.size());
        Vec rhs(idx.size());
        for (std::size_t a_ = 0; a_ < idx.size(); ++a_) {
            for (std::size_t b_ = 0; b_ < idx.size(); ++b_) {
                double s = 0.0;
                for (std::size_t i = 0; i < m; ++i) s += e(i, idx[a_]) * e(i, idx[b_]);
                g(a_, b_) = s;
            }
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) s += e(i, idx[a_]) * f[i];
            rhs[a_] = s;
        }
        for (std::size_t a_ = 0; a_ < idx.size(); ++a_) g(a_, a_) += 1e-13 * std::max(1.0, g(a_, a_));
        const Cholesky ch = cholesky(g);
        if (!ch.ok) return false;
        const Vec sol = ch.solve(rhs);
        std::fill(z.begin(), z.end(), 0.0);
        for (std::size_t a_ = 0; a_ < idx.size(); ++a_) z[idx[a_]] = sol[a_];
        return true;
    };
    auto update_resid = [&] {
        resid = f;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (x[j] != 0.0) resid[i] -= e(i, j) * x[j];
    };

    const double tol = 1e-11 * std::max(1.0, e.max_abs() * norm_inf(f));
    Vec z(n);
    for (std::size_t outer = 0; outer < 3 * n + 30; ++outer) {
        const Vec w = gradient();
        std::size_t best = n;
        double best_w = tol;
        for (std::size_t j = 0; j < n; ++j)
            if (!passive[j] && w[j] > best_w) { best = j; best_w = w[j]; }
        if (best == n) break;  // KKT satisfied
        passive[best] = true;

        for (std::size_t inner = 0; inner < 3 * n + 30; ++inner) {
            if (!solve_passive(z)) { passive[best] = false; break; }
            bool all_positive = true;
            for (std::size_t j = 0; j < n; ++j)
                if (passive[j] && z[j] <= 0.0) all_positive = false;
            if (all_positive) {
                x = z;
                break;
            }
            // step toward z until the first variable hits zero
            double alpha = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (passive[j] && z[j] <= 0.0)
                    alpha = std::min(alpha, x[j] / (x[j] - z[j]));
            for (std::size_t j = 0; j < n; ++j)
                if (passive[j]) x[j] += alpha * (z[j] - x[j]);
            for (std::size_t j = 0; j < n; ++j)
                if (passive[j] && x[j] <= 1e-14) { x[j] = 0.0; passive[j] = false; }
        }
        update_resid();
    }
    return x;
}

std::optional<Vec> ldp(const Matrix& g, const Vec& h) {
    const std::size_t m = g.rows(), n = g.cols();
    if (h.size() != m) throw Error("domain", "ldp dimension mismatch");

    // Lawson-Hanson reduction to NNLS on e = [g^T; h^T], f = e_{n+1}
    Matrix e(n + 1, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) e(j, i) = g(i, j);
        e(n, i) = h[i];
    }
    Vec f(n + 1, 0.0);
    f[n] = 1.0;

    const Vec u = nnls(e, f);
    Vec r(n + 1, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
        double s = -f[i];
        for (std::size_t j = 0; j < m; ++j) s += e(i, j) * u[j];
        r[i] = s;
    }
    if (std::abs(r[n]) < 1e-10) return std::nullopt;  // infeasible constraints
    Vec x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = -r[j] / r[n];
    return x;
}

} // namespace tricons
