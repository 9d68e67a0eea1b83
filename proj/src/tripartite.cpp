#include <cmath>
#include <sstream>

#include <json.hpp>

#include "tricons/error.hpp"
#include "tricons/lsq.hpp"
#include "tricons/tripartite.hpp"

namespace tricons {

using nlohmann::json;

namespace {

constexpr double kStrictTol = 1e-12;

Vec combine(const Vec& a, const Vec& b, double cb, const Vec& c, double cc) {
    Vec out = a;
    kernels::axpy(cb, b.data(), out.data(), out.size());
    kernels::axpy(cc, c.data(), out.data(), out.size());
    return out;
}

bool strictly_dominates(const Vec& lhs, const Vec& rhs) {
    for (std::size_t i = 0; i < lhs.size(); ++i)
        if (!(lhs[i] - rhs[i] > kStrictTol)) return false;
    return true;
}

} // namespace

Vec TripartiteGains::structured_kernel(const SignedNetwork& net) const {
    return structured_vector(net, role_order(net, labeling), {v[0], v[1], v[2]});
}

TripartiteGains gains_from_ratios(const SignedNetwork& net, const Labeling& labeling,
                                  double v2, double v3) {
    if (!labeling.valid()) throw Error("domain", "invalid labeling");
    if (v2 == 0.0 || v3 == 0.0) throw Error("domain", "zero kernel ratio");

    const BlockRowSums sums = block_row_sums(net);
    const int r1 = labeling.i1() - 1, r2 = labeling.i3() - 1, r3 = labeling.i2() - 1;
    auto a = [&](int p, int q) -> const Vec& { return sums.a[p][q]; };

    TripartiteGains gains;
    gains.labeling = labeling;
    gains.v = {1.0, v2, v3};
    gains.d[r1] = combine(a(r1, r1), a(r1, r2), v2, a(r1, r3), v3);
    gains.d[r2] = combine(a(r2, r2), a(r2, r1), 1.0 / v2, a(r2, r3), v3 / v2);
    gains.d[r3] = combine(a(r3, r3), a(r3, r1), 1.0 / v3, a(r3, r2), v2 / v3);
    gains.loop = build_closed_loop(net, gains.d);
    return gains;
}

ConstraintReport check_inequality_constraints(const SignedNetwork& net, const TripartiteGains& gains) {
    const BlockRowSums sums = block_row_sums(net);
    const RoleOrder order = role_order(net, gains.labeling);
    const int r1 = order.cluster_at[0], r2 = order.cluster_at[1];

    ConstraintReport report;
    const Vec& d1 = gains.d[r1];
    const Vec& a11 = sums.a[r1][r1];
    report.d1_dominates = strictly_dominates(d1, a11) ? ConstraintStatus::pass : ConstraintStatus::fail;
    if (report.d1_dominates == ConstraintStatus::fail) {
        report.detail = "d1 does not strictly dominate a11; remaining checks skipped";
        return report;
    }

    const Matrix w_rel = permuted(net.weights, order.perm);
    const std::size_t n1 = order.size[0], n2 = order.size[1];
    const Matrix a11_block = w_rel.block(0, 0, n1, n1);
    const Matrix a21_block = w_rel.block(n1, 0, n2, n1);
    const Matrix inv1 = nonneg_inverse(d1, a11_block);
    const Vec floor2 = sums.a[r2][r2] + a21_block * (inv1 * sums.a[r1][r2]);
    report.d2_above_floor =
        strictly_dominates(gains.d[r2], floor2) ? ConstraintStatus::pass : ConstraintStatus::fail;

    try {
        const Matrix tail_schur = schur_complement(permuted(gains.loop.m, order.perm), n1 + n2);
        report.tail_schur_residual = norm_inf(tail_schur * Vec(order.size[2], 1.0));
        report.tail_schur_row_identity =
            report.tail_schur_residual < 1e-8 ? ConstraintStatus::pass : ConstraintStatus::fail;
    } catch (const Error&) {
        report.tail_schur_row_identity = ConstraintStatus::fail;
        report.detail = "leading block not positive definite; trailing Schur complement undefined";
    }
    return report;
}

SynthesisResult verify_structured_kernel(const SignedNetwork& net, const TripartiteGains& gains) {
    SynthesisResult result;
    result.certificate = gains.loop.spectrum;
    const SpectralSummary& spec = result.certificate;

    // reduced N x 3 matrix: block row p is [d_p - a_pp | -a_pq | -a_pr]
    const BlockRowSums sums = block_row_sums(net);
    Matrix reduced(net.size, 3);
    std::size_t row = 0;
    for (int p = 0; p < 3; ++p)
        for (std::size_t k = 0; k < net.clusters[p].size(); ++k, ++row)
            for (int q = 0; q < 3; ++q)
                reduced(row, q) = (p == q ? gains.d[p][k] : 0.0) - sums.a[p][q][k];
    result.reduced_rank = numerical_rank(reduced);

    if (!spec.psd(spec.zero_tol)) {
        result.reason = "M is not positive semidefinite";
        return result;
    }
    if (spec.zero_multiplicity == 0) {
        result.reason = "M nonsingular: no zero eigenvalue";
        return result;
    }
    if (spec.zero_multiplicity > 1) {
        result.reason = "zero eigenvalue not simple";
        return result;
    }
    if (result.reduced_rank >= 3) {
        result.reason = "reduced matrix has full rank: no structured kernel vector";
        return result;
    }

    const Vec w = gains.structured_kernel(net);
    Vec k(net.size);
    for (int i = 0; i < net.size; ++i) k[i] = spec.kernel_basis(i, 0);
    const double proj = dot(k, w);
    if (std::abs(proj) < 1e-12) {
        result.reason = "kernel vector orthogonal to the structured pattern";
        return result;
    }
    const Vec scaled_k = scaled(k, dot(w, w) / proj);
    if (norm_inf(scaled_k - w) > 1e-6 * norm_inf(w)) {
        result.reason = "kernel vector does not match the (1, v2, v3) block pattern";
        return result;
    }

    result.status = SynthesisStatus::success;
    result.gains = gains;
    return result;
}

SearchConfig::SearchConfig() {
    for (int k = 0; k < 13; ++k) magnitudes.push_back(0.25 * std::pow(2.0, k));
}

namespace {

void require_admissible(const SignedNetwork& net, const Labeling& labeling, int h) {
    if (!labeling.valid() || (h != labeling.i2() && h != labeling.i3()))
        throw Error("domain", "inadmissible labeling");
    const BlockRowSums sums = block_row_sums(net);
    const bool ok = check_close_friendship(net, labeling.i1(), labeling.i2()).holds &&
                    strictly_negative(sums.a[labeling.i3() - 1][labeling.i2() - 1]) &&
                    strictly_negative(sums.a[labeling.i1() - 1][h - 1]);
    if (!ok) throw Error("domain", "inadmissible labeling");
}

} // namespace

std::optional<std::pair<double, double>> search_ratios(const SignedNetwork& net, const Labeling& labeling,
                                                       int h, const SearchConfig& cfg) {
    require_admissible(net, labeling, h);

    auto certified = [&](double v2, double v3) {
        const TripartiteGains gains = gains_from_ratios(net, labeling, v2, v3);
        return verify_structured_kernel(net, gains).status == SynthesisStatus::success;
    };

    if (cfg.pinned_ratios) {
        const auto [v2, v3] = *cfg.pinned_ratios;
        if (v2 != 0.0 && v3 != 0.0 && certified(v2, v3)) return cfg.pinned_ratios;
        return std::nullopt;
    }

    // sign guidance: for h = i3 the case a12 << 0 wants v2 < 0 (large) and
    // v3 > 0 (small); the mirrored case h = i2 swaps the roles
    using Quadrant = std::pair<double, double>;
    const Quadrant guided = (h == labeling.i3()) ? Quadrant{-1.0, 1.0} : Quadrant{1.0, -1.0};
    std::vector<Quadrant> quadrants{guided};
    for (const Quadrant& q : {Quadrant{-1.0, 1.0}, Quadrant{1.0, -1.0}, Quadrant{1.0, 1.0}, Quadrant{-1.0, -1.0}})
        if (q != guided) quadrants.push_back(q);

    for (const auto& [s2, s3] : quadrants)
        for (double m2 : cfg.magnitudes)
            for (double m3 : cfg.magnitudes)
                if (certified(s2 * m2, s3 * m3)) return std::make_pair(s2 * m2, s3 * m3);
    return std::nullopt;
}

SynthesisResult synthesize_tripartite(const SignedNetwork& net, const SearchConfig& cfg) {
    SynthesisResult result;
    const ValidationReport validation = validate_structure(net);
    if (!validation.passed()) {
        result.reason = "network fails the structural checks";
        return result;
    }
    if (validation.admissible_tripartite.empty()) {
        bool any_friendship = false;
        for (int i1 = 1; i1 <= 3; ++i1)
            for (int i2 = 1; i2 <= 3; ++i2)
                if (i1 != i2 && check_close_friendship(net, i1, i2).holds) any_friendship = true;
        result.reason = any_friendship ? "no admissible labeling: enemy conditions fail"
                                       : "no admissible labeling: close friendship fails";
        return result;
    }

    std::ostringstream reasons;
    for (const auto& [labeling, h] : validation.admissible_tripartite) {
        const auto ratios = search_ratios(net, labeling, h, cfg);
        if (!ratios) {
            reasons << "(" << labeling.i1() << "," << labeling.i2() << "," << labeling.i3() << ";h=" << h
                    << "): grid exhausted without a certified kernel; ";
            continue;
        }
        const TripartiteGains gains = gains_from_ratios(net, labeling, ratios->first, ratios->second);
        SynthesisResult verified = verify_structured_kernel(net, gains);
        if (verified.status != SynthesisStatus::success) {
            reasons << "ratio search returned an uncertifiable pair; ";
            continue;
        }
        // construction identity: the Schur complement of the first two
        // relabeled blocks annihilates the ones vector
        const RoleOrder order = role_order(net, gains.labeling);
        const Matrix m_rel = permuted(gains.loop.m, order.perm);
        const Matrix tail_schur = schur_complement(m_rel, order.size[0] + order.size[1]);
        if (norm_inf(tail_schur * Vec(order.size[2], 1.0)) > 1e-8)
            throw Error("numeric", "certified gains violate the trailing Schur complement row-sum identity");
        return verified;
    }
    result.reason = reasons.str();
    return result;
}

std::string gains_to_json(const TripartiteGains& gains) {
    json doc;
    doc["labeling"] = {gains.labeling.i1(), gains.labeling.i2(), gains.labeling.i3()};
    doc["v"] = {gains.v[0], gains.v[1], gains.v[2]};
    json d;
    for (int c = 0; c < 3; ++c) d[std::to_string(c + 1)] = gains.d[c];
    doc["d"] = d;
    return doc.dump(2);
}

TripartiteGains gains_from_json(const SignedNetwork& net, const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error("schema", std::string("gains file is not valid JSON: ") + e.what());
    }
    if (!doc.contains("labeling") || !doc.contains("v") || !doc.contains("d"))
        throw Error("schema", "tripartite gains need labeling, v and d");
    const auto lab = doc["labeling"];
    const auto v = doc["v"];
    if (lab.size() != 3 || v.size() != 3) throw Error("schema", "labeling and v must have 3 entries");

    const Labeling labeling{{lab[0].get<int>(), lab[1].get<int>(), lab[2].get<int>()}};
    if (!labeling.valid()) throw Error("schema", "labeling must be a permutation of (1,2,3)");
    if (v[0].get<double>() == 0.0 || v[1].get<double>() == 0.0 || v[2].get<double>() == 0.0)
        throw Error("schema", "kernel ratios must be nonzero");

    TripartiteGains gains = gains_from_ratios(net, labeling, v[1].get<double>() / v[0].get<double>(),
                                              v[2].get<double>() / v[0].get<double>());
    // the file's d vectors are authoritative; check they match the ratios
    for (int c = 0; c < 3; ++c) {
        const Vec file_d = doc["d"][std::to_string(c + 1)].get<Vec>();
        if (file_d.size() != gains.d[c].size())
            throw Error("schema", "gain vector length mismatch for cluster " + std::to_string(c + 1));
        for (std::size_t k = 0; k < file_d.size(); ++k)
            if (std::abs(file_d[k] - gains.d[c][k]) > 1e-6 * std::max(1.0, std::abs(gains.d[c][k])))
                throw Error("schema", "gain vectors inconsistent with the stored ratios");
    }
    return gains;
}

} // namespace tricons
