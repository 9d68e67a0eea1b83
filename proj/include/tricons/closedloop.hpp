#pragma once

// The closed-loop matrix M = D - A shared by both synthesis modes, plus
// the cluster relabeling that maps a labeling (i1, i2, i3) onto
// the synthesis working order (i1 first, i3 second, i2 third).

#include <array>

#include "tricons/matalg.hpp"
#include "tricons/network.hpp"

namespace tricons {

struct ClosedLoopMatrix {
    Matrix m;                  // symmetric, original agent order
    SpectralSummary spectrum;  // computed once at construction
};

/// Assembles M = diag(d) - A from per-cluster gain vectors (original
/// cluster order, entries following each cluster's ascending agent ids).
ClosedLoopMatrix build_closed_loop(const SignedNetwork& net, const std::array<Vec, 3>& d_by_cluster);

struct RoleOrder {
    Labeling labeling;
    std::array<int, 3> cluster_at;   // 0-based cluster id at relabeled position 0,1,2
    std::array<std::size_t, 3> size; // block sizes in relabeled order
    std::array<std::size_t, 3> offset;
    std::vector<int> perm;           // relabeled agent index -> original agent index
};

RoleOrder role_order(const SignedNetwork& net, const Labeling& labeling);

/// P W P^T for the relabeling permutation.
Matrix permuted(const Matrix& w, const std::vector<int>& perm);

/// Structured vector in original agent order: agents of the cluster at
/// relabeled position p all get value[p].
Vec structured_vector(const SignedNetwork& net, const RoleOrder& order, const std::array<double, 3>& value);

} // namespace tricons
