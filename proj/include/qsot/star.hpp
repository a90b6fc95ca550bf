#ifndef QSOT_STAR_HPP
#define QSOT_STAR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qsot/channels.hpp"
#include "qsot/linalg.hpp"

namespace qsot {

/// Spatiotemporal product on 1-chains. Left, Right and FP are linear in the
/// state; LS is not, and has no canonical multipartite extension.
enum class StarKind { Left, Right, FP, LS };

bool is_state_linear(StarKind kind);
std::string star_kind_name(StarKind kind);
StarKind star_kind_from_name(const std::string& name);

/// How a 1-chain product was extended to an n-chain: the canonical Markovian
/// iteration, or one of the holistic per-step L/R alternatives (which exist
/// only to demonstrate non-uniqueness and are non-canonical).
struct ExtensionPolicy {
    bool markovian = true;
    std::string bits;  // over {'L','R'}, one per chain step; empty for Markovian

    static ExtensionPolicy make_markovian() { return {}; }
    static ExtensionPolicy make_holistic(std::string bits);

    std::string to_string() const { return markovian ? "markovian" : "holistic:" + bits; }
};

/// Operator over the full multipartite space A_0 ... A_n, tagged with the
/// product kind and extension policy that produced it. Unit trace for any
/// kind; Hermitian for FP and LS.
struct QsotOperator {
    Operator op;
    StarKind kind;
    ExtensionPolicy policy;
};

/*
 * 1-chain products. rho may be any operator on A (the formulas for Left,
 * Right, FP are linear in it); LS additionally requires rho PSD.
 *
 *   Left:  (rho (x) 1) J[E]
 *   Right: J[E] (rho (x) 1)
 *   FP:    1/2 { rho (x) 1, J[E] }
 *   LS:    (sqrt(rho) (x) 1) J[E] (sqrt(rho) (x) 1)
 */
Operator star_1chain_op(StarKind kind, const QuantumChannel& e, const Operator& rho);
QsotOperator star_1chain(StarKind kind, const QuantumChannel& e, const Operator& rho);

/// Bloom of a channel: the linear extension of sigma -> E *_kind sigma, as an
/// OperatorMap from A to A (x) B, built column-by-column on the E_ij basis.
OperatorMap bloom_map(StarKind kind, const QuantumChannel& e);

/// Markovian n-chain extension: iteratively apply each channel's bloom map to
/// the last tensor factor. Reduces bit-for-bit to star_1chain at n = 1.
/// Throws for LS.
QsotOperator star_nchain(StarKind kind, const ChannelChain& chain, const Operator& rho);
Operator star_nchain_op(StarKind kind, const ChannelChain& chain, const Operator& rho);

/// Symmetrized holistic product 1/2 (star_C + star_Ctilde) where the bit
/// string picks Left or Right at each step and Ctilde is its complement.
/// Equals FP on 1-chains for every bits value.
QsotOperator star_nchain_holistic(const std::string& bits, const ChannelChain& chain,
                                  const Operator& rho);

struct MarginalReport {
    double max_defect = 0.0;
    bool ok = false;
};

/// Recursively verifies the two defining marginal conditions
/// Tr_{A_0}[q] = star(chain minus first, E_1(rho)) and
/// Tr_{A_n}[q] = star(chain minus last, rho), down to 1-chains.
MarginalReport marginal_check(const QsotOperator& q, const ChannelChain& chain,
                              const Operator& rho, double tol = kTolStructural);

/// State-rendering map Theta_rho: the linear map with
/// chain * rho = (Theta_rho (x) id)(chain * 1). Closed forms:
/// Left X -> rho X, Right X -> X rho, FP X -> 1/2 {rho, X}.
struct StateRenderingMap {
    StarKind kind;
    Operator rho;
    OperatorMap map;
};
StateRenderingMap state_rendering_map(StarKind kind, const Operator& rho);

/// The unique Theta'' with (Theta (x) id)(SWAP) = (id (x) Theta'')(SWAP),
/// computed as J^-1[gamma . J[Theta]] with gamma the factor swap.
OperatorMap double_dagger(const OperatorMap& theta);

/// Jamiolkowski map of an n-chain: Phi = J^-1[chain * 1], mapping A_0
/// operators into A_1 ... A_n operators.
OperatorMap jamiolkowski_map(StarKind kind, const ChannelChain& chain);

struct StructuralReport {
    double broadcasting_defect = 0.0;
    double conditionability_defect = 0.0;
    double decomposability_defect = 0.0;
    bool decomposability_ok = false;
    bool hierarchy_ok = false;
    bool has_conditionability = false;  // false for LS (no state-rendering map)
    int trials = 0;
};

/// Randomized probe of the broadcasting / conditionability / decomposability
/// identities over seeded (channel, state) pairs of dims 2 and 3.
StructuralReport structural_probe(StarKind kind, uint64_t seed, int trials,
                                  double tol = kTolStructural);

/// max-entry norm of E *_LS (rho+sigma)/2 - (E *_LS rho)/2 - (E *_LS sigma)/2.
double ls_linearity_gap(const Operator& rho, const Operator& sigma, const QuantumChannel& e);

}  // namespace qsot

#endif
