#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tricons/error.hpp"
#include "tricons/matalg.hpp"

namespace tricons {

Cholesky cholesky(const Matrix& m) {
    const std::size_t n = m.rows();
    Cholesky ch;
    ch.l = Matrix(n, n);
    double diag_scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) diag_scale = std::max(diag_scale, std::abs(m(i, i)));
    const double tol = 1e-12 * diag_scale;

    for (std::size_t j = 0; j < n; ++j) {
        double pivot = m(j, j) - kernels::dot(ch.l.row(j), ch.l.row(j), j);
        if (pivot <= tol) return ch;  // ok stays false
        pivot = std::sqrt(pivot);
        ch.l(j, j) = pivot;
        for (std::size_t i = j + 1; i < n; ++i)
            ch.l(i, j) = (m(i, j) - kernels::dot(ch.l.row(i), ch.l.row(j), j)) / pivot;
    }
    ch.ok = true;
    return ch;
}

Vec Cholesky::solve(const Vec& b) const {
    if (!ok) throw Error("numeric", "cholesky solve on failed factorization");
    const std::size_t n = l.rows();
    Vec y(b);
    for (std::size_t i = 0; i < n; ++i)
        y[i] = (y[i] - kernels::dot(l.row(i), y.data(), i)) / l(i, i);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * y[k];
        y[ii] = s / l(ii, ii);
    }
    return y;
}

Matrix Cholesky::solve(const Matrix& b) const {
    Matrix out(b.rows(), b.cols());
    Vec col(b.rows());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
        Vec x = solve(col);
        for (std::size_t i = 0; i < b.rows(); ++i) out(i, j) = x[i];
    }
    return out;
}

Matrix Cholesky::inverse() const { return solve(Matrix::identity(l.rows())); }

namespace {

void require_nonnegative_symmetric(const Vec& d, const Matrix& a) {
    if (a.rows() != a.cols() || d.size() != a.rows())
        throw Error("domain", "dimension mismatch between D and A");
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a(i, j) < 0.0)
                throw Error("domain", "A must be entrywise nonnegative");
}

Matrix d_minus_a(const Vec& d, const Matrix& a) {
    Matrix m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = (i == j ? d[i] : 0.0) - a(i, j);
    return m;
}

} // namespace

PdCertificate pd_certificate(const Vec& d, const Matrix& a) {
    require_nonnegative_symmetric(d, a);
    PdCertificate res;
    const Matrix m = d_minus_a(d, a);
    const Cholesky ch = cholesky(m);
    if (!ch.ok) return res;
    res.positive_definite = true;
    res.certificate = ch.solve(Vec(d.size(), 1.0));
    return res;
}

Matrix nonneg_inverse(const Vec& d, const Matrix& a) {
    require_nonnegative_symmetric(d, a);
    const Matrix m = d_minus_a(d, a);
    const Cholesky ch = cholesky(m);
    if (!ch.ok) throw Error("numeric", "nonneg_inverse: matrix not positive definite");
    Matrix inv = ch.inverse();
    // symmetrize and check the sign guarantee before handing it out
    const std::size_t n = inv.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (inv(i, j) + inv(j, i));
            inv(i, j) = v;
            inv(j, i) = v;
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (inv(i, j) < -1e-12)
                throw Error("numeric", "nonneg_inverse: inverse has a negative entry");
    return inv;
}

Matrix schur_complement(const Matrix& m, std::size_t head) {
    if (m.rows() != m.cols()) throw Error("domain", "schur_complement: matrix not square");
    if (head >= m.rows()) throw Error("domain", "schur_complement: head covers whole matrix");
    const std::size_t tail = m.rows() - head;

    const Matrix m11 = m.block(0, 0, head, head);
    const Cholesky ch = cholesky(m11);
    if (!ch.ok) throw Error("numeric", "schur_complement: leading block not positive definite");

    const Matrix m12 = m.block(0, head, head, tail);
    const Matrix m21 = m.block(head, 0, tail, head);
    Matrix s = m.block(head, head, tail, tail) - m21 * ch.solve(m12);
    for (std::size_t i = 0; i < tail; ++i)
        for (std::size_t j = i + 1; j < tail; ++j) {
            const double v = 0.5 * (s(i, j) + s(j, i));
            s(i, j) = v;
            s(j, i) = v;
        }
    return s;
}

namespace {

constexpr double kSupportTol = 1e-12;

// Tarjan strongly connected components on the off-diagonal support graph.
struct Scc {
    std::vector<int> component;  // node -> component id
    int count = 0;
};

Scc strong_components(const Matrix& m) {
    const int n = static_cast<int>(m.rows());
    Scc scc;
    scc.component.assign(n, -1);
    std::vector<int> index(n, -1), low(n, 0), stack;
    std::vector<bool> on_stack(n, false);
    int next = 0;

    // explicit stack to avoid recursion on large graphs
    struct Frame { int v; int j; };
    for (int start = 0; start < n; ++start) {
        if (index[start] != -1) continue;
        std::vector<Frame> frames{{start, 0}};
        index[start] = low[start] = next++;
        stack.push_back(start);
        on_stack[start] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.j < n) {
                const int w = f.j++;
                if (w == f.v || std::abs(m(f.v, w)) <= kSupportTol) continue;
                if (index[w] == -1) {
                    index[w] = low[w] = next++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                if (low[f.v] == index[f.v]) {
                    while (true) {
                        const int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        scc.component[w] = scc.count;
                        if (w == f.v) break;
                    }
                    ++scc.count;
                }
                const int v = f.v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
            }
        }
    }
    return scc;
}

// Perron root of an irreducible nonnegative matrix with positive diagonal,
// by power iteration with Collatz-Wielandt bounds as the stopping rule.
double perron_root(const Matrix& b) {
    const std::size_t n = b.rows();
    Vec x(n, 1.0);
    double lo = 0.0, hi = 0.0;
    for (int it = 0; it < 100000; ++it) {
        Vec y = b * x;
        lo = y[0] / x[0];
        hi = lo;
        for (std::size_t i = 1; i < n; ++i) {
            const double r = y[i] / x[i];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        if (hi - lo <= 1e-12 * std::max(1.0, hi)) break;
        const double nrm = norm_inf(y);
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / nrm;
    }
    return 0.5 * (lo + hi);
}

bool symmetric_within(const Matrix& m, double rel) {
    const double scale = std::max(1.0, m.max_abs());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            if (std::abs(m(i, j) - m(j, i)) > rel * scale) return false;
    return true;
}

} // namespace

MetzlerSummary metzler_summary(const Matrix& m) {
    if (m.rows() != m.cols()) throw Error("domain", "metzler_summary: matrix not square");
    const std::size_t n = m.rows();

    MetzlerSummary out;
    out.is_metzler = true;
    for (std::size_t i = 0; i < n && out.is_metzler; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && m(i, j) < -kSupportTol) {
                out.is_metzler = false;
                break;
            }

    const Scc scc = strong_components(m);
    out.is_irreducible = (scc.count == 1);

    if (!out.is_metzler) return out;

    if (symmetric_within(m, 1e-9)) {
        out.frobenius_eig = eig_sym(m).eigenvalues.back();
        return out;
    }

    // Spectrum of a Metzler matrix is the union over strongly connected
    // blocks; shift each block nonnegative and take its Perron root.
    double best = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < scc.count; ++c) {
        std::vector<std::size_t> nodes;
        for (std::size_t i = 0; i < n; ++i)
            if (scc.component[i] == c) nodes.push_back(i);
        if (nodes.size() == 1) {
            best = std::max(best, m(nodes[0], nodes[0]));
            continue;
        }
        double shift = 1.0;
        for (std::size_t i : nodes) shift = std::max(shift, 1.0 - m(i, i));
        Matrix b(nodes.size(), nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i)
            for (std::size_t j = 0; j < nodes.size(); ++j)
                b(i, j) = i == j ? m(nodes[i], nodes[i]) + shift
                                 : std::max(m(nodes[i], nodes[j]), 0.0);
        best = std::max(best, perron_root(b) - shift);
    }
    out.frobenius_eig = best;
    return out;
}

} // namespace tricons
