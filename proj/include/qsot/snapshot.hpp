#ifndef QSOT_SNAPSHOT_HPP
#define QSOT_SNAPSHOT_HPP

#include <cstdint>
#include <vector>

#include "qsot/star.hpp"

namespace qsot {

/// Observables O_0, ..., O_n matched to the systems A_0, ..., A_n of a chain.
struct ObservableChain {
    std::vector<Operator> observables;

    void validate_against(const ChannelChain& chain, double tol = kTolStructural) const;
};

/// Multi-time expectation <O_0, ..., O_n> as a direct trace of the tensor
/// observable against the n-chain QSOT. Real for FP with Hermitian inputs.
Complex expectation_direct(StarKind kind, const ChannelChain& chain, const Operator& rho,
                           const ObservableChain& obs);

/// Observable-sampling map M_O: rho -> Theta''_rho(O), built from the
/// double-dagger of the state-rendering family. Closed forms:
/// FP rho -> 1/2 {O, rho}; Left rho -> O rho; Right rho -> rho O.
struct SnapshotMap {
    StarKind kind;
    Operator observable;
    OperatorMap map;
};
SnapshotMap snapshot_map(StarKind kind, const Operator& observable);

/// Same expectation via the alternating factorization
/// Tr[O_n (E_n . M_{O_{n-1}} . ... . E_1 . M_{O_0})(rho)]; never materializes
/// the multipartite QSOT.
Complex expectation_factored(StarKind kind, const ChannelChain& chain, const Operator& rho,
                             const ObservableChain& obs);

/// max |expectation_direct - expectation_factored| over seeded random
/// (chain, state, observables) instances with n in {1,2,3}, dims in {2,3}.
/// Returns 0 for trials = 0.
double factorization_defect(StarKind kind, uint64_t seed, int trials);

}  // namespace qsot

#endif
