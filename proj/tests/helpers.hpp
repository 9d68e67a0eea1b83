#pragma once

// Shared test utilities: bundled data paths, seeded random generators,
// and the independent oracles (eigenvalue inertia, closed-form matrix
// exponential) the implementation is checked against.

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>

#include "tricons/matalg.hpp"
#include "tricons/network.hpp"

namespace testutil {

inline std::filesystem::path data_file(const std::string& name) {
    return std::filesystem::path(TRICONS_DATA_DIR) / name;
}

// deterministic uniform/normal draws independent of libstdc++ distributions
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}

    double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int integer(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(eng() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

inline tricons::Matrix random_symmetric(Rng& rng, std::size_t n, double scale = 1.0) {
    tricons::Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = rng.uniform(-scale, scale);
            m(i, j) = v;
            m(j, i) = v;
        }
    return m;
}

// random (D, A) pair with A symmetric nonnegative, zero diagonal
inline std::pair<tricons::Vec, tricons::Matrix> random_da_pair(Rng& rng, std::size_t n) {
    tricons::Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = rng.uniform(0.0, 5.0);
            a(i, j) = v;
            a(j, i) = v;
        }
    tricons::Vec d(n);
    for (double& v : d) v = rng.uniform(0.0, 12.0);
    return {d, a};
}

// inertia (negative, zero, positive counts) from the eigenvalue oracle
inline std::array<int, 3> inertia(const tricons::Matrix& m, double tol = 1e-9) {
    const auto spec = tricons::eig_sym(m);
    std::array<int, 3> counts{0, 0, 0};
    for (double lam : spec.eigenvalues) {
        if (lam < -tol) ++counts[0];
        else if (lam > tol) ++counts[2];
        else ++counts[1];
    }
    return counts;
}

// closed-form x(t) = V exp(-Lambda t) V^T x0 for symmetric M
inline tricons::Vec expm_solution(const tricons::SpectralSummary& spec, const tricons::Vec& x0, double t) {
    const std::size_t n = x0.size();
    tricons::Vec y(n, 0.0), out(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) c += spec.eigenvectors(i, j) * x0[i];
        y[j] = c * std::exp(-spec.eigenvalues[j] * t);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i] += spec.eigenvectors(i, j) * y[j];
    return out;
}

// Random connected clustering-balanced network with cluster sizes in
// [1, max_size]; dense enough that admissibility usually holds.
inline tricons::SignedNetwork random_admissible_net(std::uint64_t seed, int max_size = 4) {
    Rng rng(seed);
    std::array<int, 3> sizes;
    for (int& s : sizes) s = rng.integer(1, max_size);
    const int n = sizes[0] + sizes[1] + sizes[2];

    tricons::SignedNetwork net;
    net.size = n;
    net.weights = tricons::Matrix(n, n);
    int off = 0;
    std::array<std::pair<int, int>, 3> range;
    for (int c = 0; c < 3; ++c) {
        range[c] = {off, off + sizes[c]};
        for (int a = off; a < off + sizes[c]; ++a) net.clusters[c].push_back(a);
        off += sizes[c];
    }

    auto set_edge = [&](int a, int b, double w) {
        net.weights(a, b) = w;
        net.weights(b, a) = w;
    };
    // intra: a path plus random extras, all positive
    for (int c = 0; c < 3; ++c)
        for (int a = range[c].first; a < range[c].second; ++a)
            for (int b = a + 1; b < range[c].second; ++b)
                if (b == a + 1 || rng.uniform() < 0.5) set_edge(a, b, rng.uniform(0.5, 5.0));
    // inter: random negative edges, then ensure no zero row in any block
    for (int p = 0; p < 3; ++p)
        for (int q = p + 1; q < 3; ++q) {
            for (int a = range[p].first; a < range[p].second; ++a)
                for (int b = range[q].first; b < range[q].second; ++b)
                    if (rng.uniform() < 0.7) set_edge(a, b, -rng.uniform(0.5, 5.0));
            for (int a = range[p].first; a < range[p].second; ++a) {
                bool any = false;
                for (int b = range[q].first; b < range[q].second; ++b) any |= net.weights(a, b) != 0.0;
                if (!any) set_edge(a, range[q].first + rng.integer(0, sizes[q] - 1), -rng.uniform(0.5, 5.0));
            }
            for (int b = range[q].first; b < range[q].second; ++b) {
                bool any = false;
                for (int a = range[p].first; a < range[p].second; ++a) any |= net.weights(a, b) != 0.0;
                if (!any) set_edge(range[p].first + rng.integer(0, sizes[p] - 1), b, -rng.uniform(0.5, 5.0));
            }
        }
    return net;
}

} // namespace testutil
