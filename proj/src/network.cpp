#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "tricons/error.hpp"
#include "tricons/network.hpp"

namespace tricons {

using nlohmann::json;

int SignedNetwork::cluster_of(int agent) const {
    for (int c = 0; c < 3; ++c)
        if (std::binary_search(clusters[c].begin(), clusters[c].end(), agent)) return c;
    throw Error("domain", "agent not covered by the partition");
}

bool strictly_negative(const Vec& v, double tol) {
    for (double x : v)
        if (!(x < -tol)) return false;
    return true;
}

SignedNetwork parse_network(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error("schema", std::string("network file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("clusters") || !doc.contains("edges"))
        throw Error("schema", "network file must contain n, clusters and edges");
    if (!doc["n"].is_number_integer() || doc["n"].get<long long>() <= 0)
        throw Error("schema", "n must be a positive integer");

    SignedNetwork net;
    net.size = doc["n"].get<int>();
    net.weights = Matrix(net.size, net.size);

    const auto& clusters = doc["clusters"];
    if (!clusters.is_array() || clusters.size() != 3)
        throw Error("schema", "clusters must be an array of exactly 3 index lists");
    std::vector<int> owner(net.size, -1);
    for (int c = 0; c < 3; ++c) {
        for (const auto& v : clusters[c]) {
            if (!v.is_number_integer())
                throw Error("schema", "cluster members must be integers");
            const int id = v.get<int>();
            if (id < 1 || id > net.size)
                throw Error("schema", "cluster member " + std::to_string(id) + " outside [1,N]");
            if (owner[id - 1] != -1)
                throw Error("schema", "agent " + std::to_string(id) + " listed in two clusters");
            owner[id - 1] = c;
            net.clusters[c].push_back(id - 1);
        }
        std::sort(net.clusters[c].begin(), net.clusters[c].end());
    }
    for (int i = 0; i < net.size; ++i)
        if (owner[i] == -1)
            throw Error("schema", "partition does not cover agent " + std::to_string(i + 1));

    std::map<std::pair<int, int>, double> seen;
    for (const auto& e : doc["edges"]) {
        if (!e.is_object() || !e.contains("i") || !e.contains("j") || !e.contains("w"))
            throw Error("schema", "each edge needs fields i, j, w");
        const int i = e["i"].get<int>();
        const int j = e["j"].get<int>();
        const double w = e["w"].get<double>();
        if (i < 1 || i > net.size || j < 1 || j > net.size)
            throw Error("schema", "edge index out of range: (" + std::to_string(i) + "," + std::to_string(j) + ")");
        if (i == j) {
            if (w != 0.0)
                throw Error("schema", "self-loop with nonzero weight at agent " + std::to_string(i));
            continue;
        }
        const auto key = std::minmax(i, j);
        const auto [it, inserted] = seen.emplace(key, w);
        if (!inserted && it->second != w)
            throw Error("schema", "conflicting duplicate edge (" + std::to_string(key.first) + "," +
                                      std::to_string(key.second) + ")");
        net.weights(i - 1, j - 1) = w;
        net.weights(j - 1, i - 1) = w;
    }
    return net;
}

SignedNetwork load_network(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error("io", "cannot open network file " + file.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_network(buf.str());
}

std::string serialize_network(const SignedNetwork& net) {
    json doc;
    doc["n"] = net.size;
    json clusters = json::array();
    for (int c = 0; c < 3; ++c) {
        json members = json::array();
        for (int id : net.clusters[c]) members.push_back(id + 1);
        clusters.push_back(members);
    }
    doc["clusters"] = clusters;
    json edges = json::array();
    for (int i = 0; i < net.size; ++i)
        for (int j = i + 1; j < net.size; ++j)
            if (net.weights(i, j) != 0.0)
                edges.push_back({{"i", i + 1}, {"j", j + 1}, {"w", net.weights(i, j)}});
    doc["edges"] = edges;
    return doc.dump(2);
}

void save_network(const SignedNetwork& net, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw Error("io", "cannot write network file " + file.string());
    out << serialize_network(net) << "\n";
}

BlockRowSums block_row_sums(const SignedNetwork& net) {
    BlockRowSums sums;
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) {
            Vec& a = sums.a[p][q];
            a.assign(net.clusters[p].size(), 0.0);
            for (std::size_t r = 0; r < net.clusters[p].size(); ++r)
                for (int col : net.clusters[q]) a[r] += net.weights(net.clusters[p][r], col);
        }
    return sums;
}

namespace {

bool graph_connected(const Matrix& w) {
    const int n = static_cast<int>(w.rows());
    if (n == 0) return false;
    std::vector<bool> seen(n, false);
    std::queue<int> bfs;
    bfs.push(0);
    seen[0] = true;
    int count = 1;
    while (!bfs.empty()) {
        const int v = bfs.front();
        bfs.pop();
        for (int u = 0; u < n; ++u)
            if (!seen[u] && std::abs(w(v, u)) > 0.0) {
                seen[u] = true;
                ++count;
                bfs.push(u);
            }
    }
    return count == n;
}

// Connected components of the positive-edge subgraph induced by `members`.
std::vector<int> positive_components(const SignedNetwork& net, const std::vector<int>& members) {
    const int k = static_cast<int>(members.size());
    std::vector<int> comp(k, -1);
    int next = 0;
    for (int s = 0; s < k; ++s) {
        if (comp[s] != -1) continue;
        comp[s] = next;
        std::queue<int> bfs;
        bfs.push(s);
        while (!bfs.empty()) {
            const int v = bfs.front();
            bfs.pop();
            for (int u = 0; u < k; ++u)
                if (comp[u] == -1 && net.weights(members[v], members[u]) > 0.0) {
                    comp[u] = next;
                    bfs.push(u);
                }
        }
        ++next;
    }
    return comp;
}

} // namespace

FriendshipWitness check_close_friendship(const SignedNetwork& net, int i1, int i2) {
    if (i1 < 1 || i1 > 3 || i2 < 1 || i2 > 3 || i1 == i2)
        throw Error("domain", "close friendship needs two distinct cluster indices in [1,3]");
    const std::vector<int>& inner = net.clusters[i2 - 1];
    const std::vector<int>& outer = net.clusters[i1 - 1];

    FriendshipWitness w;
    if (inner.size() <= 1) {
        w.holds = true;
        return w;
    }
    const std::vector<int> comp = positive_components(net, outer);

    // component ids of the enemies each member of V_{i2} has inside V_{i1}
    auto enemy_components = [&](int agent) {
        std::vector<bool> hit(comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1, false);
        for (std::size_t r = 0; r < outer.size(); ++r)
            if (net.weights(agent, outer[r]) < 0.0) hit[comp[r]] = true;
        return hit;
    };
    std::vector<std::vector<bool>> hits(inner.size());
    for (std::size_t i = 0; i < inner.size(); ++i) hits[i] = enemy_components(inner[i]);

    for (std::size_t i = 0; i < inner.size(); ++i)
        for (std::size_t j = i + 1; j < inner.size(); ++j) {
            if (net.weights(inner[i], inner[j]) > 0.0) continue;  // friends
            bool shared = false;
            for (std::size_t c = 0; c < hits[i].size() && !shared; ++c)
                shared = hits[i][c] && hits[j][c];
            if (!shared) {
                w.failing_pair = {inner[i] + 1, inner[j] + 1};
                return w;
            }
        }
    w.holds = true;
    return w;
}

void enumerate_admissible_labelings(const SignedNetwork& net, ValidationReport& report) {
    const BlockRowSums sums = block_row_sums(net);
    std::array<int, 3> perm{1, 2, 3};
    std::sort(perm.begin(), perm.end());
    do {
        const Labeling lab{{perm[0], perm[1], perm[2]}};
        const int i1 = lab.i1(), i2 = lab.i2(), i3 = lab.i3();
        if (!check_close_friendship(net, i1, i2).holds) continue;
        // tripartite: every agent of V_{i3} has an enemy in V_{i2}, plus an
        // h in {i2, i3} every agent of V_{i1} has an enemy in
        if (strictly_negative(sums.a[i3 - 1][i2 - 1])) {
            for (int h : {std::min(i2, i3), std::max(i2, i3)})
                if (strictly_negative(sums.a[i1 - 1][h - 1]))
                    report.admissible_tripartite.emplace_back(lab, h);
        }
        // sign consensus needs every agent of the positive-role cluster to have an enemy in the negative-role one
        if (strictly_negative(sums.a[i1 - 1][i2 - 1])) report.admissible_sign.push_back(lab);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

ValidationReport validate_structure(const SignedNetwork& net) {
    ValidationReport report;
    auto add = [&](const std::string& name, bool pass, const std::string& detail) {
        report.checks.push_back({name, pass, detail});
    };

    bool symmetric = true;
    for (int i = 0; i < net.size && symmetric; ++i)
        for (int j = i + 1; j < net.size; ++j)
            if (net.weights(i, j) != net.weights(j, i)) { symmetric = false; break; }
    add("symmetry", symmetric, symmetric ? "weights[i][j] == weights[j][i]" : "asymmetric weight found");

    bool zero_diag = true;
    for (int i = 0; i < net.size; ++i)
        if (net.weights(i, i) != 0.0) zero_diag = false;
    add("zero-diagonal", zero_diag, zero_diag ? "no self-loops" : "nonzero diagonal entry");

    bool signs_ok = true;
    std::string sign_detail = "intra >= 0, inter <= 0";
    for (int i = 0; i < net.size && signs_ok; ++i) {
        for (int j = 0; j < net.size; ++j) {
            if (i == j) continue;
            const bool same = net.cluster_of(i) == net.cluster_of(j);
            const double w = net.weights(i, j);
            if ((same && w < 0.0) || (!same && w > 0.0)) {
                signs_ok = false;
                sign_detail = "edge (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") violates the cluster sign pattern";
                break;
            }
        }
    }
    add("sign-pattern", signs_ok, sign_detail);

    const bool connected = graph_connected(net.weights);
    add("connectivity", connected, connected ? "graph on nonzero weights is connected" : "graph is disconnected");

    bool minimal = true;
    std::string min_detail = "every inter-cluster block has an edge";
    for (int p = 0; p < 3 && minimal; ++p)
        for (int q = p + 1; q < 3; ++q) {
            bool nonzero = false;
            for (int a : net.clusters[p])
                for (int b : net.clusters[q])
                    if (net.weights(a, b) != 0.0) nonzero = true;
            if (!nonzero) {
                minimal = false;
                min_detail = "block A_{" + std::to_string(p + 1) + "," + std::to_string(q + 1) + "} is identically zero; clusters could merge";
                break;
            }
        }
    add("minimality", minimal, min_detail);

    if (report.passed()) enumerate_admissible_labelings(net, report);
    return report;
}

bool ValidationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string ValidationReport::to_text() const {
    std::ostringstream out;
    for (const auto& c : checks)
        out << (c.pass ? "PASS" : "FAIL") << "  " << c.name << ": " << c.detail << "\n";
    out << "admissible tripartite labelings:";
    if (admissible_tripartite.empty()) out << " none";
    for (const auto& [lab, h] : admissible_tripartite)
        out << " (" << lab.i1() << "," << lab.i2() << "," << lab.i3() << ";h=" << h << ")";
    out << "\nadmissible sign labelings:";
    if (admissible_sign.empty()) out << " none";
    for (const auto& lab : admissible_sign)
        out << " (" << lab.i1() << "," << lab.i2() << "," << lab.i3() << ")";
    out << "\n";
    return out.str();
}

std::string ValidationReport::to_json() const {
    json doc;
    json checks_json = json::array();
    for (const auto& c : checks)
        checks_json.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    doc["checks"] = checks_json;
    json trip = json::array();
    for (const auto& [lab, h] : admissible_tripartite)
        trip.push_back({{"labeling", {lab.i1(), lab.i2(), lab.i3()}}, {"h", h}});
    doc["admissible_tripartite"] = trip;
    json sign = json::array();
    for (const auto& lab : admissible_sign)
        sign.push_back({lab.i1(), lab.i2(), lab.i3()});
    doc["admissible_sign"] = sign;
    doc["passed"] = passed();
    return doc.dump(2);
}

} // namespace tricons
