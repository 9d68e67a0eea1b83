#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tricons/cli.hpp"
#include "tricons/error.hpp"
#include "tricons/network.hpp"
#include "tricons/signcons.hpp"
#include "tricons/simulate.hpp"
#include "tricons/tripartite.hpp"

namespace tricons::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;

double classify_tolerance() {
    if (const char* env = std::getenv("CONSENSUS_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && v > 0.0) return v;
    }
    return 1e-6;
}

void write_text(const std::filesystem::path& file, const std::string& text) {
    std::ofstream out(file);
    if (!out) throw Error("io", "cannot write " + file.string());
    out << text << "\n";
}

Vec read_x0(const std::filesystem::path& file, std::size_t n) {
    std::ifstream in(file);
    if (!in) throw Error("io", "cannot open x0 file " + file.string());
    Vec x0;
    double v;
    while (in >> v) x0.push_back(v);
    if (x0.size() != n)
        throw Error("schema", "x0 file holds " + std::to_string(x0.size()) + " values, expected " + std::to_string(n));
    return x0;
}

// gains files carry "v" (tripartite) or "v1"/"v3" (sign)
struct LoadedGains {
    std::optional<TripartiteGains> tripartite;
    std::optional<SignGains> sign;

    const ClosedLoopMatrix& loop() const { return tripartite ? tripartite->loop : sign->loop; }
};

LoadedGains load_gains(const SignedNetwork& net, const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error("io", "cannot open gains file " + file.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("schema", std::string("gains file is not valid JSON: ") + e.what());
    }
    LoadedGains gains;
    if (doc.contains("v1"))
        gains.sign = sign_gains_from_json(net, text);
    else if (doc.contains("v"))
        gains.tripartite = gains_from_json(net, text);
    else
        throw Error("schema", "gains file has neither tripartite ratios (v) nor sign vectors (v1, v3)");
    return gains;
}

std::pair<Vec, Vec> parse_null_vectors(const std::vector<std::string>& tokens) {
    std::string joined;
    for (const auto& t : tokens) joined += t + " ";
    const auto split = joined.find(';');
    if (split == std::string::npos || joined.find(';', split + 1) != std::string::npos)
        throw Error("usage", "--null-vectors needs exactly one ';' between v1 and v3");
    auto parse_list = [](const std::string& s) {
        Vec out;
        std::istringstream in(s);
        double v;
        while (in >> v) out.push_back(v);
        if (!in.eof()) throw Error("usage", "--null-vectors: could not parse a number");
        if (out.empty()) throw Error("usage", "--null-vectors: empty vector");
        return out;
    };
    return {parse_list(joined.substr(0, split)), parse_list(joined.substr(split + 1))};
}

int cmd_validate(const std::string& net_path, const std::string& report_path) {
    const SignedNetwork net = load_network(net_path);
    const ValidationReport report = validate_structure(net);
    std::cout << report.to_text();
    if (!report_path.empty()) write_text(report_path, report.to_json());
    return report.passed() ? kExitOk : kExitValidation;
}

int cmd_synth_tripartite(const std::string& net_path, const std::vector<double>& ratios,
                         const std::string& out_path) {
    const SignedNetwork net = load_network(net_path);
    SearchConfig cfg;
    if (!ratios.empty()) {
        if (ratios.size() != 2) throw Error("usage", "--ratios needs exactly two values");
        cfg.pinned_ratios = {ratios[0], ratios[1]};
    }
    const SynthesisResult result = synthesize_tripartite(net, cfg);
    if (result.status != SynthesisStatus::success) {
        std::cerr << "ERROR:infeasible:" << result.reason << "\n";
        return kExitInfeasible;
    }
    const TripartiteGains& gains = *result.gains;
    std::cout << "tripartite gains found: labeling (" << gains.labeling.i1() << "," << gains.labeling.i2()
              << "," << gains.labeling.i3() << "), ratios (1, " << gains.v[1] << ", " << gains.v[2] << ")\n";
    const std::string json = gains_to_json(gains);
    if (out_path.empty()) std::cout << json << "\n";
    else write_text(out_path, json);
    return kExitOk;
}

int cmd_synth_sign(const std::string& net_path, const std::vector<std::string>& null_vectors,
                   const std::string& out_path) {
    const SignedNetwork net = load_network(net_path);
    SignConfig cfg;
    if (!null_vectors.empty()) cfg.pinned = parse_null_vectors(null_vectors);
    const SignSynthesisResult result = synthesize_sign(net, cfg);
    if (result.status != SynthesisStatus::success) {
        std::cerr << "ERROR:infeasible:" << result.reason << "\n";
        return kExitInfeasible;
    }
    const SignGains& gains = *result.gains;
    std::cout << "sign-consensus gains found: labeling (" << gains.labeling.i1() << "," << gains.labeling.i2()
              << "," << gains.labeling.i3() << "), zero cluster " << gains.labeling.i3() << ", margin "
              << gains.margin << "\n";
    const std::string json = sign_gains_to_json(gains);
    if (out_path.empty()) std::cout << json << "\n";
    else write_text(out_path, json);
    return kExitOk;
}

int cmd_simulate(const std::string& net_path, const std::string& gains_path, const std::string& x0_path,
                 std::uint64_t seed, double dt, double horizon, int stride, const std::string& out_path,
                 const std::string& verdict_path) {
    const SignedNetwork net = load_network(net_path);
    const LoadedGains gains = load_gains(net, gains_path);
    const ClosedLoopMatrix& loop = gains.loop();

    const Vec x0 = x0_path.empty() ? random_normal(net.size, 2.0, seed) : read_x0(x0_path, net.size);
    const Trajectory traj = integrate(loop, x0, dt, horizon);
    const ConsensusVerdict verdict = classify(loop, net.clusters, x0, classify_tolerance());

    if (!out_path.empty()) write_trajectory_csv(traj, out_path, stride);
    if (!verdict_path.empty()) write_text(verdict_path, verdict_to_json(verdict));

    const char* kind = verdict.kind == ConsensusKind::tripartite ? "tripartite"
                       : verdict.kind == ConsensusKind::sign     ? "sign"
                                                                 : "none";
    std::cout << "verdict: " << kind << (verdict.degenerate ? " (degenerate draw)" : "") << ", cluster values ("
              << verdict.cluster_values[0] << ", " << verdict.cluster_values[1] << ", "
              << verdict.cluster_values[2] << ")\n";
    return kExitOk;
}

int cmd_verify(const std::string& net_path, const std::string& gains_path) {
    const SignedNetwork net = load_network(net_path);
    const LoadedGains gains = load_gains(net, gains_path);

    bool ok = false;
    if (gains.tripartite) {
        const SynthesisResult result = verify_structured_kernel(net, *gains.tripartite);
        ok = result.status == SynthesisStatus::success;
        std::cout << (ok ? "PASS" : "FAIL") << "  kernel certification"
                  << (ok ? "" : ": " + result.reason) << "\n";
        std::cout << (result.reduced_rank < 3 ? "PASS" : "FAIL") << "  reduced matrix rank "
                  << result.reduced_rank << " < 3\n";
    } else {
        const SignSynthesisResult result = verify_sign_gains(net, *gains.sign);
        ok = result.status == SynthesisStatus::success;
        std::cout << (ok ? "PASS" : "FAIL") << "  sign-consensus certification"
                  << (ok ? "" : ": " + result.reason) << "\n";
        if (ok)
            std::cout << "PASS  negated trailing Schur complement irreducible Metzler, Frobenius eigenvalue "
                      << result.tail_schur_metzler.frobenius_eig << "\n";
    }
    return ok ? kExitOk : kExitValidation;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"stubbornness-gain synthesis and simulation for three-cluster signed networks"};
    app.require_subcommand(1);

    std::string net_path, gains_path, out_path, report_path, verdict_path, x0_path;
    std::vector<double> ratios;
    std::vector<std::string> null_vectors;
    std::uint64_t seed = 0;
    double dt = 1e-3, horizon = 10.0;
    int stride = 1;

    auto* validate = app.add_subcommand("validate", "check network structure and list admissible labelings");
    validate->add_option("network", net_path, "network JSON file")->required();
    validate->add_option("--report", report_path, "write the validation report as JSON");

    auto* synth_tri = app.add_subcommand("synth-tripartite", "synthesize gains for tripartite consensus");
    synth_tri->add_option("network", net_path, "network JSON file")->required();
    synth_tri->add_option("--ratios", ratios, "pin the kernel ratios v2 v3")->expected(2);
    synth_tri->add_option("-o,--output", out_path, "write gains JSON here");

    auto* synth_sign = app.add_subcommand("synth-sign", "synthesize gains for sign consensus");
    synth_sign->add_option("network", net_path, "network JSON file")->required();
    synth_sign->add_option("--null-vectors", null_vectors,
                           "pin the null vectors: \"v1 entries ; v3 entries\"")
        ->expected(-1);
    synth_sign->add_option("-o,--output", out_path, "write gains JSON here");

    auto* simulate = app.add_subcommand("simulate", "integrate the closed loop and classify the limit");
    simulate->add_option("network", net_path, "network JSON file")->required();
    simulate->add_option("--gains", gains_path, "gains JSON file")->required();
    simulate->add_option("--x0", x0_path, "initial state file (whitespace-separated)");
    simulate->add_option("--seed", seed, "seed for the N(0,4) initial state");
    simulate->add_option("--dt", dt, "integration step");
    simulate->add_option("--T", horizon, "integration horizon");
    simulate->add_option("--stride", stride, "write every k-th sample");
    simulate->add_option("--out", out_path, "trajectory CSV path");
    simulate->add_option("--verdict", verdict_path, "verdict JSON path");

    auto* verify = app.add_subcommand("verify", "re-certify a gains file against its network");
    verify->add_option("network", net_path, "network JSON file")->required();
    verify->add_option("--gains", gains_path, "gains JSON file")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "ERROR:usage:" << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (validate->parsed()) return cmd_validate(net_path, report_path);
        if (synth_tri->parsed()) return cmd_synth_tripartite(net_path, ratios, out_path);
        if (synth_sign->parsed()) return cmd_synth_sign(net_path, null_vectors, out_path);
        if (simulate->parsed())
            return cmd_simulate(net_path, gains_path, x0_path, seed, dt, horizon, stride, out_path,
                                verdict_path);
        if (verify->parsed()) return cmd_verify(net_path, gains_path);
        std::cerr << "ERROR:usage:no command given\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "ERROR:" << e.code() << ":" << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "ERROR:internal:" << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace tricons::cli
