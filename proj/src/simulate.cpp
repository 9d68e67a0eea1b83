#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include <json.hpp>

#include "tricons/error.hpp"
#include "tricons/simulate.hpp"

namespace tricons {

Trajectory integrate(const ClosedLoopMatrix& loop, const Vec& x0, double dt, double T) {
    const std::size_t n = loop.m.rows();
    if (x0.size() != n) throw Error("domain", "x0 length does not match M");
    if (!(dt > 0.0) || !(T >= dt)) throw Error("domain", "need dt > 0 and T >= dt");
    const double lam_max = loop.spectrum.spectral_radius();
    if (dt * lam_max >= 2.5)
        throw Error("domain", "step too large for the spectrum: need dt < " + std::to_string(2.5 / lam_max));

    const std::size_t full_steps = static_cast<std::size_t>(T / dt + 1e-9);
    const double remainder = T - static_cast<double>(full_steps) * dt;
    const std::size_t total = full_steps + (remainder > 1e-12 ? 1 : 0);

    Trajectory traj;
    traj.times.resize(total + 1);
    traj.states = Matrix(total + 1, n);

    Vec x = x0, k1(n), k2(n), k3(n), k4(n), stage(n);
    const double* md = loop.m.data();
    auto deriv = [&](const Vec& in, Vec& out) {
        kernels::matvec(md, n, n, in.data(), out.data());
        for (double& v : out) v = -v;
    };

    auto record = [&](std::size_t i, double t) {
        traj.times[i] = t;
        std::copy(x.begin(), x.end(), traj.states.row(i));
    };
    record(0, 0.0);

    double t = 0.0;
    for (std::size_t step = 1; step <= total; ++step) {
        const double h = (step <= full_steps) ? dt : remainder;
        deriv(x, k1);
        stage = x;
        kernels::axpy(h / 2, k1.data(), stage.data(), n);
        deriv(stage, k2);
        stage = x;
        kernels::axpy(h / 2, k2.data(), stage.data(), n);
        deriv(stage, k3);
        stage = x;
        kernels::axpy(h, k3.data(), stage.data(), n);
        deriv(stage, k4);
        kernels::axpy(h / 6, k1.data(), x.data(), n);
        kernels::axpy(h / 3, k2.data(), x.data(), n);
        kernels::axpy(h / 3, k3.data(), x.data(), n);
        kernels::axpy(h / 6, k4.data(), x.data(), n);
        t = (step <= full_steps) ? dt * static_cast<double>(step) : T;
        record(step, t);
    }
    return traj;
}

Vec analytic_limit(const ClosedLoopMatrix& loop, const Vec& x0) {
    const SpectralSummary& spec = loop.spectrum;
    if (!spec.psd(spec.zero_tol)) throw Error("domain", "analytic_limit requires a PSD matrix");
    const std::size_t n = loop.m.rows();
    if (x0.size() != n) throw Error("domain", "x0 length does not match M");

    Vec limit(n, 0.0);
    for (int j = 0; j < spec.zero_multiplicity; ++j) {
        double coeff = 0.0;
        for (std::size_t i = 0; i < n; ++i) coeff += spec.kernel_basis(i, j) * x0[i];
        for (std::size_t i = 0; i < n; ++i) limit[i] += coeff * spec.kernel_basis(i, j);
    }
    return limit;
}

ConsensusVerdict classify(const ClosedLoopMatrix& loop, const std::array<std::vector<int>, 3>& clusters,
                          const Vec& x0, double tol) {
    const SpectralSummary& spec = loop.spectrum;
    if (spec.zero_multiplicity > 1)
        throw Error("domain", "classification undefined: kernel dimension > 1");

    ConsensusVerdict verdict;
    verdict.limit = analytic_limit(loop, x0);
    const double limit_scale = norm_inf(verdict.limit);

    std::array<double, 3> spread{}, maxabs{};
    for (int c = 0; c < 3; ++c) {
        double lo = 0.0, hi = 0.0, mean = 0.0, amax = 0.0;
        bool first = true;
        for (int agent : clusters[c]) {
            const double v = verdict.limit[agent];
            lo = first ? v : std::min(lo, v);
            hi = first ? v : std::max(hi, v);
            first = false;
            mean += v;
            amax = std::max(amax, std::abs(v));
        }
        spread[c] = hi - lo;
        maxabs[c] = amax;
        verdict.cluster_values[c] = clusters[c].empty() ? 0.0 : mean / static_cast<double>(clusters[c].size());
        verdict.cluster_signs[c] = maxabs[c] <= tol ? 0 : (verdict.cluster_values[c] > 0 ? 1 : -1);
    }

    if (limit_scale < tol) {
        verdict.degenerate = true;
        return verdict;
    }

    const double spread_tol = tol * (1.0 + limit_scale);
    if (spread[0] < spread_tol && spread[1] < spread_tol && spread[2] < spread_tol) {
        verdict.kind = ConsensusKind::tripartite;
        return verdict;
    }

    int zeros = 0, positives = 0, negatives = 0;
    for (int c = 0; c < 3; ++c) {
        if (maxabs[c] < tol) {
            ++zeros;
            continue;
        }
        // a nonzero cluster must be uniformly signed with all magnitudes > tol
        bool uniform_pos = true, uniform_neg = true;
        for (int agent : clusters[c]) {
            uniform_pos = uniform_pos && verdict.limit[agent] > tol;
            uniform_neg = uniform_neg && verdict.limit[agent] < -tol;
        }
        if (uniform_pos) ++positives;
        else if (uniform_neg) ++negatives;
    }
    if (zeros == 1 && positives == 1 && negatives == 1) verdict.kind = ConsensusKind::sign;
    return verdict;
}

double convergence_time(const ClosedLoopMatrix& loop, const Vec& x0, double rel_eps) {
    if (!(rel_eps > 0.0) || rel_eps >= 1.0) throw Error("domain", "rel_eps must lie in (0,1)");
    const Vec xinf = analytic_limit(loop, x0);
    const double r0 = norm2(x0 - xinf);
    // states already at the limit (up to kernel-basis roundoff) take no time
    if (r0 <= 1e-12 * (1.0 + norm2(x0))) return 0.0;

    const double rate = loop.spectrum.min_nonzero;
    if (rate <= 0.0) throw Error("numeric", "no decaying modes: convergence time undefined");
    const double t_bound = -std::log(rel_eps) / rate;

    const double lam_max = std::max(loop.spectrum.spectral_radius(), 1e-12);
    const double dt = std::min(1e-3, 1.0 / lam_max);
    const std::size_t n = loop.m.rows();

    Vec x = x0, k1(n), k2(n), k3(n), k4(n), stage(n);
    auto deriv = [&](const Vec& in, Vec& out) {
        kernels::matvec(loop.m.data(), n, n, in.data(), out.data());
        for (double& v : out) v = -v;
    };
    double t = 0.0;
    const double target = rel_eps * r0;
    while (t <= 1.5 * t_bound + dt) {
        if (norm2(x - xinf) <= target) return t;
        deriv(x, k1);
        stage = x;
        kernels::axpy(dt / 2, k1.data(), stage.data(), n);
        deriv(stage, k2);
        stage = x;
        kernels::axpy(dt / 2, k2.data(), stage.data(), n);
        deriv(stage, k3);
        stage = x;
        kernels::axpy(dt, k3.data(), stage.data(), n);
        deriv(stage, k4);
        kernels::axpy(dt / 6, k1.data(), x.data(), n);
        kernels::axpy(dt / 3, k2.data(), x.data(), n);
        kernels::axpy(dt / 3, k3.data(), x.data(), n);
        kernels::axpy(dt / 6, k4.data(), x.data(), n);
        t += dt;
    }
    return t;
}

Vec random_normal(std::size_t n, double stddev, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    auto uniform = [&] {
        // (0,1]: avoids log(0) below
        return (static_cast<double>(eng() >> 11) + 1.0) * 0x1.0p-53;
    };
    Vec out(n);
    for (std::size_t i = 0; i < n; i += 2) {
        const double u1 = uniform(), u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        out[i] = stddev * r * std::cos(2.0 * M_PI * u2);
        if (i + 1 < n) out[i + 1] = stddev * r * std::sin(2.0 * M_PI * u2);
    }
    return out;
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& file, int stride) {
    if (stride < 1) throw Error("usage", "stride must be >= 1");
    std::ofstream out(file);
    if (!out) throw Error("io", "cannot write trajectory file " + file.string());

    const std::size_t n = traj.states.cols();
    out << "t";
    for (std::size_t j = 1; j <= n; ++j) out << ",x" << j;
    out << "\n";
    char buf[32];
    const std::size_t rows = traj.times.size();
    std::size_t i = 0;
    while (true) {
        std::snprintf(buf, sizeof buf, "%.12g", traj.times[i]);
        out << buf;
        for (std::size_t j = 0; j < n; ++j) {
            std::snprintf(buf, sizeof buf, "%.12g", traj.states(i, j));
            out << ',' << buf;
        }
        out << "\n";
        if (i + 1 >= rows) break;
        i = std::min(i + static_cast<std::size_t>(stride), rows - 1);  // last sample always written
    }
}

std::string verdict_to_json(const ConsensusVerdict& verdict) {
    nlohmann::json doc;
    switch (verdict.kind) {
        case ConsensusKind::tripartite: doc["kind"] = "tripartite"; break;
        case ConsensusKind::sign: doc["kind"] = "sign"; break;
        case ConsensusKind::none: doc["kind"] = "none"; break;
    }
    doc["limit"] = verdict.limit;
    doc["cluster_values"] = verdict.cluster_values;
    doc["cluster_signs"] = verdict.cluster_signs;
    doc["degenerate"] = verdict.degenerate;
    return doc.dump(2);
}

} // namespace tricons
