#include "qsot/snapshot.hpp"

#include <algorithm>
#include <cmath>

#include "qsot/rng.hpp"

namespace qsot {

void ObservableChain::validate_against(const ChannelChain& chain, double tol) const {
    const SystemDims sys = chain.system_dims();
    if (static_cast<int>(observables.size()) != sys.count())
        throw ValidationError("ObservableChain: need one observable per system (" +
                              std::to_string(sys.count()) + ")");
    for (int k = 0; k < sys.count(); ++k) {
        if (observables[static_cast<size_t>(k)].dims().total() != sys.dim(k))
            throw ValidationError("ObservableChain: observable " + std::to_string(k) +
                                  " dim mismatch");
        if (!observables[static_cast<size_t>(k)].is_hermitian(tol))
            throw ValidationError("ObservableChain: observable " + std::to_string(k) +
                                  " not Hermitian");
    }
}

Complex expectation_direct(StarKind kind, const ChannelChain& chain, const Operator& rho,
                           const ObservableChain& obs) {
    obs.validate_against(chain);
    const Operator q = star_nchain_op(kind, chain, rho);
    Matrix tensor_obs = obs.observables[0].matrix();
    for (size_t k = 1; k < obs.observables.size(); ++k)
        tensor_obs = kron(tensor_obs, obs.observables[k].matrix());
    return (tensor_obs * q.matrix()).trace();
}

SnapshotMap snapshot_map(StarKind kind, const Operator& observable) {
    if (!is_state_linear(kind))
        throw ValidationError("snapshot_map: kind must be state-linear");
    if (!observable.is_hermitian())
        throw ValidationError("snapshot_map: observable must be Hermitian");
    const int d = observable.dim();
    const SystemDims dims{d};
    // rho -> Theta''_rho(O); linear in rho because the rendering family is.
    OperatorMap map = OperatorMap::from_action(dims, dims, [&](const Matrix& rho) {
        const OperatorMap theta =
            state_rendering_map(kind, Operator(dims, rho)).map;
        return double_dagger(theta).apply_matrix(observable.matrix());
    });
    return {kind, observable, std::move(map)};
}

Complex expectation_factored(StarKind kind, const ChannelChain& chain, const Operator& rho,
                             const ObservableChain& obs) {
    obs.validate_against(chain);
    if (!is_state_linear(kind))
        throw ValidationError("expectation_factored: kind must be state-linear");
    Matrix state = rho.matrix();
    for (int k = 0; k < chain.size(); ++k) {
        const SnapshotMap m = snapshot_map(kind, obs.observables[static_cast<size_t>(k)]);
        state = apply_matrix(chain.channels[static_cast<size_t>(k)], m.map.apply_matrix(state));
    }
    return (obs.observables.back().matrix() * state).trace();
}

double factorization_defect(StarKind kind, uint64_t seed, int trials) {
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        Rng rng(splitmix64(seed + static_cast<uint64_t>(t)));
        const int n = 1 + static_cast<int>(rng.raw() % 3);
        std::vector<int> dims;
        for (int k = 0; k <= n; ++k) dims.push_back(2 + static_cast<int>(rng.raw() % 2));
        std::vector<QuantumChannel> chs;
        for (int k = 0; k < n; ++k)
            chs.push_back(random_channel(dims[static_cast<size_t>(k)],
                                         dims[static_cast<size_t>(k + 1)], rng.raw()));
        const ChannelChain chain(std::move(chs));
        const Operator rho(SystemDims{dims[0]}, rng.random_density(dims[0]));
        ObservableChain obs;
        for (int k = 0; k <= n; ++k)
            obs.observables.emplace_back(SystemDims{dims[static_cast<size_t>(k)]},
                                         rng.random_hermitian(dims[static_cast<size_t>(k)]));
        const Complex a = expectation_direct(kind, chain, rho, obs);
        const Complex b = expectation_factored(kind, chain, rho, obs);
        worst = std::max(worst, std::abs(a - b));
    }
    return worst;
}

}  // namespace qsot
