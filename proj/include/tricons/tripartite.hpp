#pragma once

// Stubbornness-gain synthesis for tripartite consensus: pick kernel
// ratios (v2, v3), build the three gain vectors from the block row sums,
// and certify that the closed loop is PSD with a simple structured kernel.

#include <optional>
#include <string>
#include <utility>

#include "tricons/closedloop.hpp"

namespace tricons {

struct TripartiteGains {
    Labeling labeling;
    std::array<double, 3> v{1.0, 0.0, 0.0};  // (1, v2, v3) in relabeled order
    std::array<Vec, 3> d;                    // by original cluster index
    ClosedLoopMatrix loop;

    /// Kernel vector (1, v2, v3 on the respective role blocks) in original
    /// agent order.
    Vec structured_kernel(const SignedNetwork& net) const;
};

/// d1 = a11 + v2 a12 + v3 a13 (and cyclic analogues scaled by 1/v2, 1/v3)
/// in relabeled order, mapped back to original cluster indexing. Requires
/// nonzero ratios.
TripartiteGains gains_from_ratios(const SignedNetwork& net, const Labeling& labeling,
                                  double v2, double v3);

enum class ConstraintStatus { pass, fail, skipped };

struct ConstraintReport {
    ConstraintStatus d1_dominates = ConstraintStatus::skipped;      // d1 >> a11
    ConstraintStatus d2_above_floor = ConstraintStatus::skipped;    // d2 >> a22 + A21 (D1-A11)^{-1} a12
    ConstraintStatus tail_schur_row_identity = ConstraintStatus::skipped; // trailing Schur complement * 1 = 0
    double tail_schur_residual = 0.0;
    std::string detail;

    bool all_pass() const {
        return d1_dominates == ConstraintStatus::pass && d2_above_floor == ConstraintStatus::pass &&
               tail_schur_row_identity == ConstraintStatus::pass;
    }
};

/// Reports the sufficient-condition chain from the PSD construction. The
/// chain is sufficient, not necessary: certified gains may legitimately
/// fail it, so callers must not gate synthesis on this report.
ConstraintReport check_inequality_constraints(const SignedNetwork& net, const TripartiteGains& gains);

enum class SynthesisStatus { success, infeasible };

struct SynthesisResult {
    SynthesisStatus status = SynthesisStatus::infeasible;
    std::string reason;
    std::optional<TripartiteGains> gains;
    SpectralSummary certificate;
    std::size_t reduced_rank = 3;  // rank of the N x 3 reduced matrix
};

/// Certification of a candidate gain set: M PSD with a simple
/// zero eigenvalue, reduced matrix rank < 3, and the kernel matching the
/// (1, v2, v3) block pattern.
SynthesisResult verify_structured_kernel(const SignedNetwork& net, const TripartiteGains& gains);

struct SearchConfig {
    Vec magnitudes;  // defaults to 0.25 * 2^k, k = 0..12
    std::optional<std::pair<double, double>> pinned_ratios;

    SearchConfig();
};

/// First (v2, v3) on the sign-guided grid whose gains certify, or nullopt.
/// h selects which of the two admissible enemy conditions guides the signs.
std::optional<std::pair<double, double>> search_ratios(const SignedNetwork& net, const Labeling& labeling,
                                                       int h, const SearchConfig& cfg);

/// Tries admissible labelings in deterministic order and returns the first
/// fully certified gain set.
SynthesisResult synthesize_tripartite(const SignedNetwork& net, const SearchConfig& cfg = SearchConfig());

std::string gains_to_json(const TripartiteGains& gains);
TripartiteGains gains_from_json(const SignedNetwork& net, const std::string& text);

} // namespace tricons
