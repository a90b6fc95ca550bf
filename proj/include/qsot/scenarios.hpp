#ifndef QSOT_SCENARIOS_HPP
#define QSOT_SCENARIOS_HPP

#include <array>

#include "qsot/quasiprob.hpp"
#include "qsot/star.hpp"

namespace qsot {

using Bloch = std::array<double, 3>;

/// u . sigma for a unit Bloch vector: Hermitian, traceless, eigenvalues +-1.
Operator spin_observable(const Bloch& u);

/// Three-time qubit scenario: devices measuring spin along u1, u2, u3 with
/// trivial evolution in between, so the underlying QSOT is id^2 *_FP rho.
struct LeggettGargConfig {
    std::array<Bloch, 3> bloch_vectors;
    Operator rho;

    LeggettGargConfig(std::array<Bloch, 3> vectors, Operator state);
};

/// The standard violating configuration: coplanar unit vectors at 60 degrees,
/// u1 = (1,0,0), u2 = (1/2, v3/2, 0), u3 = (-1/2, v3/2, 0).
std::array<Bloch, 3> default_bloch_vectors();

/// 2x2 outcome table indexed by signs (+1, -1) x (+1, -1).
struct PairTable {
    // [s][t] with index 0 = +1, 1 = -1
    std::array<std::array<double, 2>, 2> p{};

    double sum() const { return p[0][0] + p[0][1] + p[1][0] + p[1][1]; }
    double weighted_sum() const { return p[0][0] - p[0][1] - p[1][0] + p[1][1]; }
    double min() const;
};

/// Lueders-rule sequential probabilities P_ij(s, t) = Tr[Pi_i^s rho Pi_i^s Pi_j^t]
/// for measuring O_i then O_j (1-based pair indices, i < j).
PairTable collapse_pair_probs(const Operator& rho, int i, int j, const LeggettGargConfig& config);

/// C_ij from the collapse table: sum st P_ij(s, t).
double correlator_collapse(const Operator& rho, int i, int j, const LeggettGargConfig& config);

/// C_ij = Tr[id^2 *_FP rho (O_i (x) O_j (x) 1)] with the observables placed at
/// time slots i, j (slot k = system A_{k-1}) and identity at the idle slot.
double correlator_qsot(const Operator& rho, int i, int j, const LeggettGargConfig& config);

/// Quasiprobability pair table from the tripartite QSOT: real part of
/// Tr[Q3 (Pi_i^s at slot i)(Pi_j^t at slot j)(1 elsewhere)].
PairTable qsot_pair_table(const Operator& rho, int i, int j, const LeggettGargConfig& config);

struct LgReport {
    double c12 = 0.0, c23 = 0.0, c13 = 0.0;
    double lg_sum = 0.0;  // C12 + C23 - C13
    bool violated = false;
    std::array<PairTable, 3> collapse_tables;  // pairs (1,2), (2,3), (1,3)
    std::array<PairTable, 3> qsot_tables;
    double route_defect = 0.0;        // max |C_ij collapse - C_ij qsot|
    double table_defect = 0.0;        // max entrywise |P_ij - Q_ij|
    double weighted_sum_defect = 0.0; // max |sum st P - sum st Q|
};

/// Full three-time run: correlators via both routes, the inequality sum, and
/// the P vs Q tables (entrywise different in general, equal weighted sums).
LgReport lg_run(const LeggettGargConfig& config, double tol = 1e-12);

struct NonMarkovReport {
    QuasiDistribution distribution;       // tripartite, bases Z / X / Z on id^2 *_FP pi
    ConditionalTable cond_full;           // Q(k | i, j)
    ConditionalTable cond_pair;           // Q(k | j)
    double cond_formula_defect = 0.0;     // vs Re[<c_k|b_j><a_i|c_k>/<a_i|b_j>]
    double delta_defect = 0.0;            // vs delta_ik
    double pair_value_defect = 0.0;       // vs 1/2
    MarkovReport markov;
};

/// Demonstrates that the quasiprobabilities of a Markovian QSOT need not form
/// a classical Markov chain: on id^2 *_FP pi with mutually unbiased bases
/// Z, X, Z, the conditional Q(k|i,j) = delta_ik while Q(k|j) = 1/2.
NonMarkovReport nonmarkov_demo();

}  // namespace qsot

#endif
