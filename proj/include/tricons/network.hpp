#pragma once

// Signed, weighted, undirected networks with a fixed three-way cluster
// partition, their structural validation, and the block row sums that
// feed the gain constructions.

#include <algorithm>
#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tricons/matrix.hpp"

namespace tricons {

/// Permutation of (1,2,3): which cluster plays each synthesis role.
/// Stored 1-based to match the file formats.
struct Labeling {
    std::array<int, 3> idx{1, 2, 3};  // (i1, i2, i3)

    int i1() const { return idx[0]; }
    int i2() const { return idx[1]; }
    int i3() const { return idx[2]; }
    bool valid() const {
        std::array<int, 3> s = idx;
        std::sort(s.begin(), s.end());
        return s == std::array<int, 3>{1, 2, 3};
    }
    friend bool operator==(const Labeling&, const Labeling&) = default;
};

struct SignedNetwork {
    int size = 0;                              // N
    Matrix weights;                            // symmetric, zero diagonal
    std::array<std::vector<int>, 3> clusters;  // 0-based agent ids, ascending

    int cluster_size(int c) const { return static_cast<int>(clusters[c].size()); }
    /// 0-based cluster index of a 0-based agent.
    int cluster_of(int agent) const;
};

/// a[p][q] = row sums of block A_{p+1,q+1} (0-based indexing into the array).
struct BlockRowSums {
    std::array<std::array<Vec, 3>, 3> a;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    std::vector<std::pair<Labeling, int>> admissible_tripartite;  // (labeling, h)
    std::vector<Labeling> admissible_sign;

    bool passed() const;
    std::string to_text() const;
    std::string to_json() const;
};

/// Witness for the close-friendship check: on failure, `failing_pair`
/// holds the first offending pair of agents (1-based).
struct FriendshipWitness {
    bool holds = false;
    std::optional<std::pair<int, int>> failing_pair;
};

SignedNetwork load_network(const std::filesystem::path& file);
SignedNetwork parse_network(const std::string& json_text);
std::string serialize_network(const SignedNetwork& net);
void save_network(const SignedNetwork& net, const std::filesystem::path& file);

/// Structural checks: symmetry, zero diagonal, sign pattern, connectivity,
/// and minimality (no all-zero inter-cluster block). Failures are report
/// entries, not errors. Also fills the admissible labeling lists.
ValidationReport validate_structure(const SignedNetwork& net);

BlockRowSums block_row_sums(const SignedNetwork& net);

/// Close-friendship test for clusters (i1, i2), 1-based. True when V_{i2}
/// is a singleton or every pair in V_{i2} is either directly befriended or
/// has enemies r, s in V_{i1} lying in one connected component of the
/// positive-edge subgraph of V_{i1} (r = s allowed).
FriendshipWitness check_close_friendship(const SignedNetwork& net, int i1, int i2);

/// Admissible labelings for the two synthesis modes. Tripartite lists
/// (labeling, h) with close friendship on (i1,i2), a[i3][i2] strictly
/// negative and a[i1][h] strictly negative for h in {i2, i3}; sign lists
/// labelings with close friendship on (i1,i2) and a[i1][i2] strictly
/// negative. Enumeration order is lexicographic in (i1, i2, i3), h ascending.
void enumerate_admissible_labelings(const SignedNetwork& net, ValidationReport& report);

/// Strict entrywise negativity with the sign-noise guard tolerance.
bool strictly_negative(const Vec& v, double tol = 1e-12);

} // namespace tricons
