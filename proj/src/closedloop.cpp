#include "tricons/closedloop.hpp"

#include "tricons/error.hpp"

namespace tricons {

ClosedLoopMatrix build_closed_loop(const SignedNetwork& net, const std::array<Vec, 3>& d_by_cluster) {
    for (int c = 0; c < 3; ++c)
        if (d_by_cluster[c].size() != net.clusters[c].size())
            throw Error("domain", "gain vector length does not match cluster " + std::to_string(c + 1));

    Matrix m(net.size, net.size);
    for (int i = 0; i < net.size; ++i)
        for (int j = 0; j < net.size; ++j) m(i, j) = -net.weights(i, j);
    for (int c = 0; c < 3; ++c)
        for (std::size_t k = 0; k < net.clusters[c].size(); ++k) {
            const int agent = net.clusters[c][k];
            m(agent, agent) += d_by_cluster[c][k];
        }
    SpectralSummary spectrum = eig_sym(m);
    return {std::move(m), std::move(spectrum)};
}

RoleOrder role_order(const SignedNetwork& net, const Labeling& labeling) {
    if (!labeling.valid()) throw Error("domain", "labeling must be a permutation of (1,2,3)");
    RoleOrder order;
    order.labeling = labeling;
    order.cluster_at = {labeling.i1() - 1, labeling.i3() - 1, labeling.i2() - 1};
    std::size_t off = 0;
    for (int p = 0; p < 3; ++p) {
        const auto& members = net.clusters[order.cluster_at[p]];
        order.size[p] = members.size();
        order.offset[p] = off;
        off += members.size();
        order.perm.insert(order.perm.end(), members.begin(), members.end());
    }
    return order;
}

Matrix permuted(const Matrix& w, const std::vector<int>& perm) {
    Matrix out(perm.size(), perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = 0; j < perm.size(); ++j) out(i, j) = w(perm[i], perm[j]);
    return out;
}

Vec structured_vector(const SignedNetwork& net, const RoleOrder& order, const std::array<double, 3>& value) {
    Vec w(net.size, 0.0);
    for (int p = 0; p < 3; ++p)
        for (int agent : net.clusters[order.cluster_at[p]]) w[agent] = value[p];
    return w;
}

} // namespace tricons
