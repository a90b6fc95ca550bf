#ifndef QSOT_CHANNELS_HPP
#define QSOT_CHANNELS_HPP

#include <cstdint>
#include <vector>

#include "qsot/linalg.hpp"

namespace qsot {

/// CPTP map in Kraus form. Kraus matrices are out_dim x in_dim; trace
/// preservation (sum K^dag K = 1) and complete positivity (Choi PSD) are
/// checked by is_cptp, not enforced on construction.
struct QuantumChannel {
    int in_dim = 0;
    int out_dim = 0;
    std::vector<Matrix> kraus;

    QuantumChannel() = default;
    QuantumChannel(int in, int out, std::vector<Matrix> k);
};

/// Ordered list of composable channels: channels[k].out_dim must equal
/// channels[k+1].in_dim. Truncations are sublist views.
struct ChannelChain {
    std::vector<QuantumChannel> channels;

    ChannelChain() = default;
    explicit ChannelChain(std::vector<QuantumChannel> chs);

    int size() const { return static_cast<int>(channels.size()); }
    int in_dim() const { return channels.front().in_dim; }
    int out_dim() const { return channels.back().out_dim; }

    /// Dims of the full multipartite system A_0 ... A_n the chain spans.
    SystemDims system_dims() const;

    /// Drop the first channel (the underline truncation).
    ChannelChain truncate_below() const;
    /// Drop the last channel (the overline truncation).
    ChannelChain truncate_above() const;
};

struct CptpReport {
    double tp_defect = 0.0;
    double min_choi_eig = 0.0;
    bool ok = false;
};

/// Jamiolkowski matrix J[E] = (id (x) E)(SWAP) = sum_ij E_ij (x) E(E_ji),
/// on dims [in, out]. Basis-dependent; differs from the Choi matrix by a
/// partial transpose. J[id] = SWAP.
Operator jamiolkowski(const QuantumChannel& e);

/// Inverse of the Jamiolkowski isomorphism: the map rho -> Tr_A[(rho (x) 1) M]
/// for a bipartite operator M over in_dims (x) out_dims.
OperatorMap inverse_jamiolkowski(const Operator& m, const SystemDims& in, const SystemDims& out);

/// sum_k K rho K^dag.
Operator apply(const QuantumChannel& e, const Operator& rho);
Matrix apply_matrix(const QuantumChannel& e, const Matrix& rho);

/// Kraus composition: (e2 . e1) has Kraus set {K2_j K1_i}.
QuantumChannel compose(const QuantumChannel& e2, const QuantumChannel& e1);

/// tp_defect = max|sum K^dag K - 1|; ok iff tp_defect <= tol and the Choi
/// matrix's minimum eigenvalue is >= -tol.
CptpReport is_cptp(const QuantumChannel& e, double tol = kTolStructural);

/// Channel action as an OperatorMap on the E_ij basis.
OperatorMap channel_map(const QuantumChannel& e);

/// Seeded random CPTP channel via a Haar Stinespring isometry traced over an
/// env_dim-dimensional environment. Deterministic in the seed.
QuantumChannel random_channel(int in_dim, int out_dim, int env_dim, uint64_t seed);
QuantumChannel random_channel(int in_dim, int out_dim, uint64_t seed);  // env = in*out

QuantumChannel identity_channel(int d);
QuantumChannel unitary_channel(const Matrix& u);
/// Fully depolarizing qubit-or-qudit channel rho -> Tr[rho] 1/d.
QuantumChannel depolarizing_channel(int d);

}  // namespace qsot

#endif
