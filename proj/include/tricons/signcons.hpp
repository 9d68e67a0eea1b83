#pragma once

// Gain synthesis for sign consensus: find a sign-constrained null vector
// of the stacked boundary blocks, fix the two boundary clusters' gains
// from it, then escalate the middle cluster's gains until the Schur chain
// certifies a PSD closed loop with a simple structured kernel.

#include <optional>
#include <string>
#include <utility>

#include "tricons/closedloop.hpp"
#include "tricons/tripartite.hpp"  // SynthesisStatus

namespace tricons {

struct SignGains {
    Labeling labeling;  // i1: positive role, i2: opposite role, i3: zero role
    Vec v1;             // strictly positive, length n_{i1}
    Vec v3;             // strictly negative, length n_{i2}
    std::array<Vec, 3> d;  // by original cluster index
    ClosedLoopMatrix loop;
    double margin = 0.0;   // accepted middle-gain margin above the floor

    /// Kernel vector [v1, 0, v3] on the role blocks, in original agent order.
    Vec structured_kernel(const SignedNetwork& net) const;
};

struct SignConfig {
    double eps = 1e-3;       // strictness margin for the null vector signs
    double margin0 = 1.0;    // initial middle-gain margin
    int max_doublings = 40;
    std::optional<std::pair<Vec, Vec>> pinned;  // (v1, v3) override
};

/// Sign-constrained vector in the null space of [A_{i3,i1} | A_{i3,i2}]:
/// v1 >> eps, v3 << -eps after normalizing the max magnitude to 1. Among
/// feasible directions the minimum-norm one (LDP) is returned; nullopt
/// when the sign pattern is infeasible.
std::optional<std::pair<Vec, Vec>> find_signed_nullspace(const SignedNetwork& net, const Labeling& labeling,
                                                         double eps);

/// Diagonal gains for the two boundary clusters, componentwise
/// d_p[i] = (sum_{j != i} A_pp[i][j] v_p[j] + A_pq[i] . v_q) / v_p[i].
/// Returns (d for cluster i1, d for cluster i2).
std::pair<Vec, Vec> boundary_gains(const SignedNetwork& net, const Labeling& labeling,
                                   const Vec& v1, const Vec& v3);

/// Strict lower bound a22 + A21 (D1 - A11)^{-1} a12 for the middle
/// cluster's gains (relabeled order; "middle" is the i3 role).
Vec middle_gain_floor(const SignedNetwork& net, const Labeling& labeling, const Vec& d1);

struct SignSynthesisResult {
    SynthesisStatus status = SynthesisStatus::infeasible;
    std::string reason;
    std::optional<SignGains> gains;
    SpectralSummary certificate;
    MetzlerSummary tail_schur_metzler;  // of negated trailing Schur complement
};

SignSynthesisResult synthesize_sign(const SignedNetwork& net, const SignConfig& cfg = SignConfig());

/// Re-certifies an existing gain set: coupling-row residual, the Schur
/// chain on negated trailing Schur complement, and the PSD/simple-kernel conditions on M.
SignSynthesisResult verify_sign_gains(const SignedNetwork& net, const SignGains& gains);

std::string sign_gains_to_json(const SignGains& gains);
SignGains sign_gains_from_json(const SignedNetwork& net, const std::string& text);

} // namespace tricons
