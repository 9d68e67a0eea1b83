#include <cmath>
#include <sstream>

#include <json.hpp>

#include "tricons/error.hpp"
#include "tricons/lsq.hpp"
#include "tricons/signcons.hpp"

namespace tricons {

using nlohmann::json;

Vec SignGains::structured_kernel(const SignedNetwork& net) const {
    const RoleOrder order = role_order(net, labeling);
    Vec w(net.size, 0.0);
    const auto& c1 = net.clusters[order.cluster_at[0]];
    const auto& c3 = net.clusters[order.cluster_at[2]];
    for (std::size_t k = 0; k < c1.size(); ++k) w[c1[k]] = v1[k];
    for (std::size_t k = 0; k < c3.size(); ++k) w[c3[k]] = v3[k];
    return w;
}

namespace {

Matrix stacked_boundary_block(const SignedNetwork& net, const RoleOrder& order) {
    // rows: zero-role cluster (i3); columns: i1 agents then i2 agents
    const auto& rows = net.clusters[order.cluster_at[1]];
    const auto& c1 = net.clusters[order.cluster_at[0]];
    const auto& c3 = net.clusters[order.cluster_at[2]];
    Matrix b(rows.size(), c1.size() + c3.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t j = 0; j < c1.size(); ++j) b(r, j) = net.weights(rows[r], c1[j]);
        for (std::size_t j = 0; j < c3.size(); ++j) b(r, c1.size() + j) = net.weights(rows[r], c3[j]);
    }
    return b;
}

} // namespace

std::optional<std::pair<Vec, Vec>> find_signed_nullspace(const SignedNetwork& net, const Labeling& labeling,
                                                         double eps) {
    if (!labeling.valid()) throw Error("domain", "invalid labeling");
    const RoleOrder order = role_order(net, labeling);
    const std::size_t n1 = order.size[0], n3 = order.size[2];

    const Matrix b = stacked_boundary_block(net, order);
    const Matrix basis = nullspace(b);
    if (basis.cols() == 0) return std::nullopt;

    // sign the basis rows (+ for the positive role, - for the negative one)
    // and ask LDP for the minimum-norm coefficient vector with margin 1
    Matrix g(n1 + n3, basis.cols());
    for (std::size_t i = 0; i < n1 + n3; ++i)
        for (std::size_t j = 0; j < basis.cols(); ++j)
            g(i, j) = (i < n1 ? basis(i, j) : -basis(i, j));
    const auto alpha = ldp(g, Vec(n1 + n3, 1.0));
    if (!alpha) return std::nullopt;

    Vec v(n1 + n3, 0.0);
    for (std::size_t i = 0; i < n1 + n3; ++i)
        for (std::size_t j = 0; j < basis.cols(); ++j) v[i] += basis(i, j) * (*alpha)[j];

    const double scale = norm_inf(v);
    if (scale == 0.0) return std::nullopt;
    for (double& x : v) x /= scale;

    Vec v1(v.begin(), v.begin() + n1);
    Vec v3(v.begin() + n1, v.end());
    for (double x : v1)
        if (!(x > eps)) return std::nullopt;
    for (double x : v3)
        if (!(x < -eps)) return std::nullopt;
    return std::make_pair(std::move(v1), std::move(v3));
}

std::pair<Vec, Vec> boundary_gains(const SignedNetwork& net, const Labeling& labeling,
                                   const Vec& v1, const Vec& v3) {
    const RoleOrder order = role_order(net, labeling);
    const auto& c1 = net.clusters[order.cluster_at[0]];
    const auto& c3 = net.clusters[order.cluster_at[2]];
    if (v1.size() != c1.size() || v3.size() != c3.size())
        throw Error("domain", "null vector lengths do not match the boundary clusters");
    for (double x : v1)
        if (x == 0.0) throw Error("domain", "zero component in v1");
    for (double x : v3)
        if (x == 0.0) throw Error("domain", "zero component in v3");

    auto eq25 = [&](const std::vector<int>& own, const std::vector<int>& other, const Vec& vp, const Vec& vq) {
        Vec d(own.size());
        for (std::size_t i = 0; i < own.size(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < own.size(); ++j)
                if (j != i) s += net.weights(own[i], own[j]) * vp[j];
            for (std::size_t k = 0; k < other.size(); ++k) s += net.weights(own[i], other[k]) * vq[k];
            d[i] = s / vp[i];
        }
        return d;
    };
    Vec d1 = eq25(c1, c3, v1, v3);
    Vec d3 = eq25(c3, c1, v3, v1);

    // the construction solves (D_p - A_pp) v_p = A_pq v_q exactly; verify
    auto residual = [&](const std::vector<int>& own, const std::vector<int>& other, const Vec& d,
                        const Vec& vp, const Vec& vq) {
        double worst = 0.0;
        for (std::size_t i = 0; i < own.size(); ++i) {
            double s = d[i] * vp[i];
            for (std::size_t j = 0; j < own.size(); ++j)
                if (j != i) s -= net.weights(own[i], own[j]) * vp[j];
            for (std::size_t k = 0; k < other.size(); ++k) s -= net.weights(own[i], other[k]) * vq[k];
            worst = std::max(worst, std::abs(s));
        }
        return worst;
    };
    if (residual(c1, c3, d1, v1, v3) > 1e-10 || residual(c3, c1, d3, v3, v1) > 1e-10)
        throw Error("numeric", "boundary gain construction residual exceeds 1e-10");
    return {std::move(d1), std::move(d3)};
}

Vec middle_gain_floor(const SignedNetwork& net, const Labeling& labeling, const Vec& d1) {
    const RoleOrder order = role_order(net, labeling);
    const Matrix w_rel = permuted(net.weights, order.perm);
    const std::size_t n1 = order.size[0], n2 = order.size[1];
    const Matrix a11 = w_rel.block(0, 0, n1, n1);
    if (!pd_certificate(d1, a11).positive_definite)
        throw Error("numeric", "D1 - A11 is not positive definite");

    const BlockRowSums sums = block_row_sums(net);
    const int r1 = order.cluster_at[0], r2 = order.cluster_at[1];
    const Matrix a21 = w_rel.block(n1, 0, n2, n1);
    return sums.a[r2][r2] + a21 * (nonneg_inverse(d1, a11) * sums.a[r1][r2]);
}

namespace {

struct Certification {
    bool ok = false;
    std::string why;
    SpectralSummary spectrum;
    MetzlerSummary tail_schur_metzler;
};

Certification certify(const SignedNetwork& net, const RoleOrder& order, const ClosedLoopMatrix& loop,
                      const Vec& w) {
    Certification cert;
    const std::size_t head = order.size[0] + order.size[1];
    const std::size_t n3 = order.size[2];

    Matrix tail_schur;
    try {
        tail_schur = schur_complement(permuted(loop.m, order.perm), head);
    } catch (const Error&) {
        cert.why = "leading block not positive definite";
        return cert;
    }

    Matrix neg_tail(n3, n3);
    for (std::size_t i = 0; i < n3; ++i)
        for (std::size_t j = 0; j < n3; ++j) neg_tail(i, j) = -tail_schur(i, j);
    for (std::size_t i = 0; i < n3; ++i)
        for (std::size_t j = 0; j < n3; ++j)
            if (i != j && !(neg_tail(i, j) > 1e-10)) {
                cert.why = "negated trailing Schur complement off-diagonal not strictly positive";
                return cert;
            }
    cert.tail_schur_metzler = metzler_summary(neg_tail);
    if (!cert.tail_schur_metzler.is_metzler || !cert.tail_schur_metzler.is_irreducible) {
        cert.why = "negated trailing Schur complement is not an irreducible Metzler matrix";
        return cert;
    }

    const SpectralSummary tail_spec = eig_sym(tail_schur);
    if (!tail_spec.psd(tail_spec.zero_tol) || tail_spec.zero_multiplicity != 1) {
        cert.why = "trailing Schur complement is not PSD with a simple zero eigenvalue";
        return cert;
    }

    cert.spectrum = loop.spectrum;
    if (!cert.spectrum.psd(cert.spectrum.zero_tol)) {
        cert.why = "M is not positive semidefinite";
        return cert;
    }
    if (cert.spectrum.zero_multiplicity != 1) {
        cert.why = "M zero eigenvalue not simple";
        return cert;
    }
    Vec k(net.size);
    for (int i = 0; i < net.size; ++i) k[i] = cert.spectrum.kernel_basis(i, 0);
    const double proj = dot(k, w);
    if (std::abs(proj) < 1e-12) {
        cert.why = "kernel vector orthogonal to [v1, 0, v3]";
        return cert;
    }
    const Vec scaled_k = scaled(k, dot(w, w) / proj);
    if (norm_inf(scaled_k - w) > 1e-6 * norm_inf(w)) {
        cert.why = "kernel vector does not match [v1, 0, v3]";
        return cert;
    }
    cert.ok = true;
    return cert;
}

// residuals of the cancellation chain behind the trailing Schur complement
std::pair<double, double> cancellation_residuals(const SignedNetwork& net, const RoleOrder& order,
                                                   const Vec& d1, const Vec& d3, const Vec& v1, const Vec& v3) {
    const Matrix w_rel = permuted(net.weights, order.perm);
    const std::size_t n1 = order.size[0], n2 = order.size[1], n3 = order.size[2];
    const Matrix a11 = w_rel.block(0, 0, n1, n1);
    const Matrix inv1 = nonneg_inverse(d1, a11);
    const Matrix a13 = w_rel.block(0, n1 + n2, n1, n3);
    const Matrix a21 = w_rel.block(n1, 0, n2, n1);
    const Matrix a31 = w_rel.block(n1 + n2, 0, n3, n1);
    const Matrix a33 = w_rel.block(n1 + n2, n1 + n2, n3, n3);
    const Matrix a23 = w_rel.block(n1, n1 + n2, n2, n3);

    const Vec a13v3 = a13 * v3;
    Vec resid_neg_rows = a33 * v3 + a31 * (inv1 * a13v3);
    for (std::size_t i = 0; i < n3; ++i) resid_neg_rows[i] -= d3[i] * v3[i];
    const Vec resid_mid_rows = a21 * (inv1 * a13v3) + a23 * v3;
    return {norm_inf(resid_neg_rows), norm_inf(resid_mid_rows)};
}

} // namespace

SignSynthesisResult synthesize_sign(const SignedNetwork& net, const SignConfig& cfg) {
    SignSynthesisResult result;
    const ValidationReport validation = validate_structure(net);
    if (!validation.passed()) {
        result.reason = "network fails the structural checks";
        return result;
    }
    if (validation.admissible_sign.empty()) {
        bool any_friendship = false;
        for (int i1 = 1; i1 <= 3; ++i1)
            for (int i2 = 1; i2 <= 3; ++i2)
                if (i1 != i2 && check_close_friendship(net, i1, i2).holds) any_friendship = true;
        result.reason = any_friendship ? "no admissible labeling: enemy coverage fails"
                                       : "no admissible labeling: close friendship fails";
        return result;
    }

    std::ostringstream reasons;
    for (const Labeling& labeling : validation.admissible_sign) {
        const RoleOrder order = role_order(net, labeling);
        auto tag = [&] {
            std::ostringstream t;
            t << "(" << labeling.i1() << "," << labeling.i2() << "," << labeling.i3() << ")";
            return t.str();
        };

        Vec v1, v3;
        if (cfg.pinned) {
            if (cfg.pinned->first.size() != order.size[0] || cfg.pinned->second.size() != order.size[2]) {
                reasons << tag() << ": pinned null vectors have wrong lengths; ";
                continue;
            }
            v1 = cfg.pinned->first;
            v3 = cfg.pinned->second;
            const Matrix b = stacked_boundary_block(net, order);
            Vec stacked(v1);
            stacked.insert(stacked.end(), v3.begin(), v3.end());
            const double resid = norm_inf(b * stacked);
            if (resid > 1e-10 * std::max(1.0, b.max_abs() * norm_inf(stacked))) {
                reasons << tag() << ": pinned vectors do not annihilate the coupling rows; ";
                continue;
            }
        } else {
            auto found = find_signed_nullspace(net, labeling, cfg.eps);
            if (!found) {
                reasons << tag() << ": no sign-feasible null vector; ";
                continue;
            }
            v1 = std::move(found->first);
            v3 = std::move(found->second);
        }

        auto [d1, d3] = boundary_gains(net, labeling, v1, v3);
        Vec floor2;
        try {
            floor2 = middle_gain_floor(net, labeling, d1);
        } catch (const Error& e) {
            reasons << tag() << ": " << e.what() << "; ";
            continue;
        }

        std::array<Vec, 3> d;
        d[order.cluster_at[0]] = d1;
        d[order.cluster_at[2]] = d3;

        double margin = cfg.margin0;
        bool done = false;
        for (int k = 0; k <= cfg.max_doublings && !done; ++k, margin *= 2.0) {
            Vec d2 = floor2;
            for (double& x : d2) x += margin;
            d[order.cluster_at[1]] = d2;

            ClosedLoopMatrix loop = build_closed_loop(net, d);
            SignGains gains;
            gains.labeling = labeling;
            gains.v1 = v1;
            gains.v3 = v3;
            gains.d = d;
            gains.margin = margin;
            const Vec w = gains.structured_kernel(net);
            gains.loop = std::move(loop);

            const Certification cert = certify(net, order, gains.loop, w);
            if (!cert.ok) continue;

            const auto [resid_neg_rows, resid_mid_rows] = cancellation_residuals(net, order, d1, d3, v1, v3);
            if (resid_neg_rows > 1e-8 || resid_mid_rows > 1e-8) {
                reasons << tag() << ": cancellation residuals exceed 1e-8; ";
                break;
            }
            result.status = SynthesisStatus::success;
            result.certificate = cert.spectrum;
            result.tail_schur_metzler = cert.tail_schur_metzler;
            result.gains = std::move(gains);
            done = true;
        }
        if (done) return result;
        if (result.status != SynthesisStatus::success && reasons.str().find(tag()) == std::string::npos)
            reasons << tag() << ": margin escalation exhausted; ";
    }
    result.reason = reasons.str();
    return result;
}

SignSynthesisResult verify_sign_gains(const SignedNetwork& net, const SignGains& gains) {
    SignSynthesisResult result;
    const RoleOrder order = role_order(net, gains.labeling);
    if (gains.v1.size() != order.size[0] || gains.v3.size() != order.size[2]) {
        result.reason = "null vector lengths do not match the labeling";
        return result;
    }
    const Matrix b = stacked_boundary_block(net, order);
    Vec stacked(gains.v1);
    stacked.insert(stacked.end(), gains.v3.begin(), gains.v3.end());
    if (norm_inf(b * stacked) > 1e-10 * std::max(1.0, b.max_abs() * norm_inf(stacked))) {
        result.reason = "null vectors do not annihilate the coupling rows";
        return result;
    }
    const Certification cert = certify(net, order, gains.loop, gains.structured_kernel(net));
    if (!cert.ok) {
        result.reason = cert.why;
        return result;
    }
    result.status = SynthesisStatus::success;
    result.certificate = cert.spectrum;
    result.tail_schur_metzler = cert.tail_schur_metzler;
    result.gains = gains;
    return result;
}

std::string sign_gains_to_json(const SignGains& gains) {
    json doc;
    doc["labeling"] = {gains.labeling.i1(), gains.labeling.i2(), gains.labeling.i3()};
    doc["v1"] = gains.v1;
    doc["v3"] = gains.v3;
    doc["margin"] = gains.margin;
    json d;
    for (int c = 0; c < 3; ++c) d[std::to_string(c + 1)] = gains.d[c];
    doc["d"] = d;
    return doc.dump(2);
}

SignGains sign_gains_from_json(const SignedNetwork& net, const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error("schema", std::string("gains file is not valid JSON: ") + e.what());
    }
    if (!doc.contains("labeling") || !doc.contains("v1") || !doc.contains("v3") || !doc.contains("d"))
        throw Error("schema", "sign gains need labeling, v1, v3 and d");
    const auto lab = doc["labeling"];
    if (lab.size() != 3) throw Error("schema", "labeling must have 3 entries");
    SignGains gains;
    gains.labeling = Labeling{{lab[0].get<int>(), lab[1].get<int>(), lab[2].get<int>()}};
    if (!gains.labeling.valid()) throw Error("schema", "labeling must be a permutation of (1,2,3)");
    gains.v1 = doc["v1"].get<Vec>();
    gains.v3 = doc["v3"].get<Vec>();
    gains.margin = doc.value("margin", 0.0);
    for (int c = 0; c < 3; ++c) {
        gains.d[c] = doc["d"][std::to_string(c + 1)].get<Vec>();
        if (gains.d[c].size() != net.clusters[c].size())
            throw Error("schema", "gain vector length mismatch for cluster " + std::to_string(c + 1));
    }
    const RoleOrder order = role_order(net, gains.labeling);
    if (gains.v1.size() != order.size[0] || gains.v3.size() != order.size[2])
        throw Error("schema", "null vector lengths do not match the labeling");
    gains.loop = build_closed_loop(net, gains.d);
    return gains;
}

} // namespace tricons
