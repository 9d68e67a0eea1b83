#pragma once

// Closed-loop dynamics: fixed-step RK4 integration of xdot = -M x,
// analytic limits by kernel projection, and consensus classification.

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

#include "tricons/closedloop.hpp"

namespace tricons {

struct Trajectory {
    Vec times;      // strictly increasing, starts at 0
    Matrix states;  // one row per sample; first row is x0
};

/// Classical RK4 with fixed step dt up to horizon T (a shorter final step
/// lands exactly on T). Requires dt * lambda_max(M) < 2.5.
Trajectory integrate(const ClosedLoopMatrix& loop, const Vec& x0, double dt, double T);

/// lim_{t->inf} e^{-Mt} x0 for symmetric PSD M: the orthogonal projection
/// of x0 onto the numerical kernel.
Vec analytic_limit(const ClosedLoopMatrix& loop, const Vec& x0);

enum class ConsensusKind { tripartite, sign, none };

struct ConsensusVerdict {
    ConsensusKind kind = ConsensusKind::none;
    Vec limit;
    std::array<double, 3> cluster_values{0, 0, 0};  // per-cluster limit means
    std::array<int, 3> cluster_signs{0, 0, 0};      // sign pattern of the limit
    bool degenerate = false;                        // zero projection onto the kernel
};

/// Classifies the analytic limit. Tolerance defaults to 1e-6 (or the
/// CONSENSUS_TOL environment override picked up by the CLI).
ConsensusVerdict classify(const ClosedLoopMatrix& loop, const std::array<std::vector<int>, 3>& clusters,
                          const Vec& x0, double tol = 1e-6);

/// Smallest sampled t with ||x(t) - xinf|| <= rel_eps * ||x0 - xinf||.
double convergence_time(const ClosedLoopMatrix& loop, const Vec& x0, double rel_eps);

/// Deterministic N(0, stddev^2) draws (Box-Muller over mt19937_64, so the
/// stream is identical across standard libraries).
Vec random_normal(std::size_t n, double stddev, std::uint64_t seed);

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& file, int stride = 1);
std::string verdict_to_json(const ConsensusVerdict& verdict);

} // namespace tricons
