#include "qsot/channels.hpp"

#include <cmath>
#include <string>

#include "qsot/rng.hpp"

namespace qsot {

QuantumChannel::QuantumChannel(int in, int out, std::vector<Matrix> k)
    : in_dim(in), out_dim(out), kraus(std::move(k)) {
    if (in_dim < 1 || out_dim < 1)
        throw ValidationError("QuantumChannel: dimensions must be >= 1");
    if (kraus.empty()) throw ValidationError("QuantumChannel: Kraus list must be nonempty");
    for (const auto& m : kraus)
        if (m.rows() != out_dim || m.cols() != in_dim)
            throw ValidationError("QuantumChannel: Kraus matrices must be out_dim x in_dim");
}

ChannelChain::ChannelChain(std::vector<QuantumChannel> chs) : channels(std::move(chs)) {
    if (channels.empty()) throw ValidationError("ChannelChain: must contain at least one channel");
    for (size_t k = 0; k + 1 < channels.size(); ++k)
        if (channels[k].out_dim != channels[k + 1].in_dim)
            throw ValidationError("ChannelChain: channel " + std::to_string(k) +
                                  " output dim does not match channel " + std::to_string(k + 1) +
                                  " input dim");
}

SystemDims ChannelChain::system_dims() const {
    std::vector<int> d;
    d.push_back(in_dim());
    for (const auto& c : channels) d.push_back(c.out_dim);
    return SystemDims(std::move(d));
}

ChannelChain ChannelChain::truncate_below() const {
    return ChannelChain(std::vector<QuantumChannel>(channels.begin() + 1, channels.end()));
}

ChannelChain ChannelChain::truncate_above() const {
    return ChannelChain(std::vector<QuantumChannel>(channels.begin(), channels.end() - 1));
}

Matrix apply_matrix(const QuantumChannel& e, const Matrix& rho) {
    if (rho.rows() != e.in_dim || rho.cols() != e.in_dim)
        throw ValidationError("apply: state dim does not match channel input dim");
    Matrix out = Matrix::Zero(e.out_dim, e.out_dim);
    for (const auto& k : e.kraus) out += k * rho * k.adjoint();
    return out;
}

Operator apply(const QuantumChannel& e, const Operator& rho) {
    return Operator(SystemDims{e.out_dim}, apply_matrix(e, rho.matrix()));
}

Operator jamiolkowski(const QuantumChannel& e) {
    const int di = e.in_dim, dout = e.out_dim;
    Matrix j = Matrix::Zero(di * dout, di * dout);
    Matrix basis = Matrix::Zero(di, di);
    for (int i = 0; i < di; ++i) {
        for (int jj = 0; jj < di; ++jj) {
            basis(jj, i) = 1.0;  // E_ji
            j.block(i * dout, jj * dout, dout, dout) = apply_matrix(e, basis);
            basis(jj, i) = 0.0;
        }
    }
    return Operator(SystemDims{di, dout}, std::move(j));
}

OperatorMap inverse_jamiolkowski(const Operator& m, const SystemDims& in, const SystemDims& out) {
    const int di = in.total(), dout = out.total();
    if (m.dim() != di * dout)
        throw ValidationError("inverse_jamiolkowski: operator size does not match in*out dims");
    // L(rho) = Tr_A[(rho (x) 1) M]; L(E_ij) depends only on the (j,i) block of M.
    Matrix lm(dout * dout, di * di);
    for (int i = 0; i < di; ++i)
        for (int j = 0; j < di; ++j)
            lm.col(i * di + j) =
                OperatorMap::vectorize(m.matrix().block(j * dout, i * dout, dout, dout));
    return OperatorMap(in, out, std::move(lm));
}

QuantumChannel compose(const QuantumChannel& e2, const QuantumChannel& e1) {
    if (e1.out_dim != e2.in_dim)
        throw ValidationError("compose: e1 output dim does not match e2 input dim");
    std::vector<Matrix> k;
    k.reserve(e1.kraus.size() * e2.kraus.size());
    for (const auto& k2 : e2.kraus)
        for (const auto& k1 : e1.kraus) k.push_back(k2 * k1);
    return QuantumChannel(e1.in_dim, e2.out_dim, std::move(k));
}

CptpReport is_cptp(const QuantumChannel& e, double tol) {
    CptpReport rep;
    Matrix s = Matrix::Zero(e.in_dim, e.in_dim);
    for (const auto& k : e.kraus) s += k.adjoint() * k;
    rep.tp_defect = (s - Matrix::Identity(e.in_dim, e.in_dim)).cwiseAbs().maxCoeff();

    // Choi = sum_ij E_ij (x) E(E_ij); PSD iff the channel is CP.
    const int di = e.in_dim, dout = e.out_dim;
    Matrix choi = Matrix::Zero(di * dout, di * dout);
    Matrix basis = Matrix::Zero(di, di);
    for (int i = 0; i < di; ++i) {
        for (int j = 0; j < di; ++j) {
            basis(i, j) = 1.0;
            choi.block(i * dout, j * dout, dout, dout) = apply_matrix(e, basis);
            basis(i, j) = 0.0;
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (choi + choi.adjoint()), Eigen::EigenvaluesOnly);
    rep.min_choi_eig = es.eigenvalues().minCoeff();
    rep.ok = rep.tp_defect <= tol && rep.min_choi_eig >= -tol;
    return rep;
}

OperatorMap channel_map(const QuantumChannel& e) {
    return OperatorMap::from_action(SystemDims{e.in_dim}, SystemDims{e.out_dim},
                                    [&](const Matrix& x) { return apply_matrix(e, x); });
}

QuantumChannel random_channel(int in_dim, int out_dim, int env_dim, uint64_t seed) {
    if (env_dim < 1) throw ValidationError("random_channel: env_dim must be >= 1");
    if (out_dim * env_dim < in_dim)
        throw ValidationError("random_channel: out_dim * env_dim must be >= in_dim");
    Rng rng(seed);
    // Stinespring V: H_in -> H_out (x) H_env with env the least significant
    // factor; Kraus K_e(k, i) = V(k*env + e, i).
    Matrix v = rng.haar_isometry(out_dim * env_dim, in_dim);
    std::vector<Matrix> kraus(static_cast<size_t>(env_dim), Matrix::Zero(out_dim, in_dim));
    for (int e = 0; e < env_dim; ++e)
        for (int k = 0; k < out_dim; ++k)
            for (int i = 0; i < in_dim; ++i) kraus[static_cast<size_t>(e)](k, i) = v(k * env_dim + e, i);
    return QuantumChannel(in_dim, out_dim, std::move(kraus));
}

QuantumChannel random_channel(int in_dim, int out_dim, uint64_t seed) {
    return random_channel(in_dim, out_dim, in_dim * out_dim, seed);
}

QuantumChannel identity_channel(int d) {
    return QuantumChannel(d, d, {Matrix::Identity(d, d)});
}

QuantumChannel unitary_channel(const Matrix& u) {
    if (u.rows() != u.cols()) throw ValidationError("unitary_channel: matrix must be square");
    return QuantumChannel(static_cast<int>(u.cols()), static_cast<int>(u.rows()), {u});
}

QuantumChannel depolarizing_channel(int d) {
    // Kraus set {E_ij / sqrt(d)}: rho -> Tr[rho] 1/d.
    std::vector<Matrix> k;
    k.reserve(static_cast<size_t>(d) * static_cast<size_t>(d));
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Matrix m = Matrix::Zero(d, d);
            m(i, j) = s;
            k.push_back(std::move(m));
        }
    return QuantumChannel(d, d, std::move(k));
}

}  // namespace qsot
