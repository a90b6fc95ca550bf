#include "qsot/scenarios.hpp"

#include <algorithm>
#include <cmath>

namespace qsot {

namespace {

const Matrix& pauli_x() {
    static const Matrix m = (Matrix(2, 2) << 0, 1, 1, 0).finished();
    return m;
}
const Matrix& pauli_y() {
    static const Matrix m = (Matrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
    return m;
}
const Matrix& pauli_z() {
    static const Matrix m = (Matrix(2, 2) << 1, 0, 0, -1).finished();
    return m;
}

// Projector onto the s-eigenspace of a spin observable, s = +1 or -1.
Matrix spin_projector(const Bloch& u, int s) {
    const Matrix o = spin_observable(u).matrix();
    return 0.5 * (Matrix::Identity(2, 2) + static_cast<double>(s) * o);
}

void check_pair(int i, int j) {
    if (i < 1 || j > 3 || i >= j)
        throw ValidationError("pair indices must satisfy 1 <= i < j <= 3");
}

int sign_of(int index) { return index == 0 ? 1 : -1; }

}  // namespace

Operator spin_observable(const Bloch& u) {
    const double norm = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    if (std::abs(norm - 1.0) > 1e-12)
        throw ValidationError("spin_observable: Bloch vector must be unit norm");
    return Operator(SystemDims{2}, u[0] * pauli_x() + u[1] * pauli_y() + u[2] * pauli_z());
}

LeggettGargConfig::LeggettGargConfig(std::array<Bloch, 3> vectors, Operator state)
    : bloch_vectors(vectors), rho(std::move(state)) {
    for (const auto& u : bloch_vectors) spin_observable(u);  // validates norms
    if (rho.dims().total() != 2)
        throw ValidationError("LeggettGargConfig: state must be a qubit");
}

std::array<Bloch, 3> default_bloch_vectors() {
    const double h = std::sqrt(3.0) / 2.0;
    return {Bloch{1.0, 0.0, 0.0}, Bloch{0.5, h, 0.0}, Bloch{-0.5, h, 0.0}};
}

double PairTable::min() const {
    return std::min(std::min(p[0][0], p[0][1]), std::min(p[1][0], p[1][1]));
}

PairTable collapse_pair_probs(const Operator& rho, int i, int j,
                              const LeggettGargConfig& config) {
    check_pair(i, j);
    PairTable table;
    for (int a = 0; a < 2; ++a) {
        const Matrix pi = spin_projector(config.bloch_vectors[static_cast<size_t>(i - 1)], sign_of(a));
        const Matrix collapsed = pi * rho.matrix() * pi;
        for (int b = 0; b < 2; ++b) {
            const Matrix pj =
                spin_projector(config.bloch_vectors[static_cast<size_t>(j - 1)], sign_of(b));
            table.p[static_cast<size_t>(a)][static_cast<size_t>(b)] =
                (collapsed * pj).trace().real();
        }
    }
    return table;
}

double correlator_collapse(const Operator& rho, int i, int j, const LeggettGargConfig& config) {
    return collapse_pair_probs(rho, i, j, config).weighted_sum();
}

namespace {

// Tripartite FP QSOT for the trivial-evolution scenario.
Operator lg_qsot(const Operator& rho) {
    const ChannelChain chain({identity_channel(2), identity_channel(2)});
    return star_nchain_op(StarKind::FP, chain, rho);
}

double trace_against_slots(const Operator& q3, const Matrix& a, int slot_a, const Matrix& b,
                           int slot_b) {
    std::array<Matrix, 3> slots{Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                                Matrix::Identity(2, 2)};
    slots[static_cast<size_t>(slot_a - 1)] = a;
    slots[static_cast<size_t>(slot_b - 1)] = b;
    const Matrix full = kron(kron(slots[0], slots[1]), slots[2]);
    return (q3.matrix() * full).trace().real();
}

}  // namespace

double correlator_qsot(const Operator& rho, int i, int j, const LeggettGargConfig& config) {
    check_pair(i, j);
    const Operator q3 = lg_qsot(rho);
    const Matrix oi = spin_observable(config.bloch_vectors[static_cast<size_t>(i - 1)]).matrix();
    const Matrix oj = spin_observable(config.bloch_vectors[static_cast<size_t>(j - 1)]).matrix();
    return trace_against_slots(q3, oi, i, oj, j);
}

PairTable qsot_pair_table(const Operator& rho, int i, int j, const LeggettGargConfig& config) {
    check_pair(i, j);
    const Operator q3 = lg_qsot(rho);
    PairTable table;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const Matrix pi =
                spin_projector(config.bloch_vectors[static_cast<size_t>(i - 1)], sign_of(a));
            const Matrix pj =
                spin_projector(config.bloch_vectors[static_cast<size_t>(j - 1)], sign_of(b));
            table.p[static_cast<size_t>(a)][static_cast<size_t>(b)] =
                trace_against_slots(q3, pi, i, pj, j);
        }
    return table;
}

LgReport lg_run(const LeggettGargConfig& config, double tol) {
    LgReport rep;
    const std::array<std::pair<int, int>, 3> pairs{{{1, 2}, {2, 3}, {1, 3}}};
    std::array<double, 3> c_collapse{}, c_qsot{};
    for (size_t k = 0; k < pairs.size(); ++k) {
        const auto [i, j] = pairs[k];
        rep.collapse_tables[k] = collapse_pair_probs(config.rho, i, j, config);
        rep.qsot_tables[k] = qsot_pair_table(config.rho, i, j, config);
        c_collapse[k] = rep.collapse_tables[k].weighted_sum();
        c_qsot[k] = rep.qsot_tables[k].weighted_sum();
        rep.route_defect = std::max(rep.route_defect, std::abs(c_collapse[k] - c_qsot[k]));
        rep.weighted_sum_defect = rep.route_defect;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                rep.table_defect = std::max(
                    rep.table_defect,
                    std::abs(rep.collapse_tables[k].p[static_cast<size_t>(a)][static_cast<size_t>(b)] -
                             rep.qsot_tables[k].p[static_cast<size_t>(a)][static_cast<size_t>(b)]));
    }
    rep.c12 = c_collapse[0];
    rep.c23 = c_collapse[1];
    rep.c13 = c_collapse[2];
    rep.lg_sum = rep.c12 + rep.c23 - rep.c13;
    rep.violated = rep.lg_sum > 1.0 + tol;
    return rep;
}

NonMarkovReport nonmarkov_demo() {
    NonMarkovReport rep;
    const Operator pi(SystemDims{2}, 0.5 * Matrix::Identity(2, 2));
    const ChannelChain chain({identity_channel(2), identity_channel(2)});
    const QsotOperator q3 = star_nchain(StarKind::FP, chain, pi);

    // Mutually unbiased bases: a = Z eigenbasis, b = X eigenbasis, c = Z.
    Matrix zbasis = Matrix::Identity(2, 2);
    Matrix xbasis(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    xbasis << s, s, s, -s;
    const std::array<Matrix, 3> bases{zbasis, xbasis, zbasis};
    const std::vector<Povm> povms{projective_povm(bases[0]), projective_povm(bases[1]),
                                  projective_povm(bases[2])};

    rep.distribution = from_qsot(q3, povms);
    rep.cond_full = conditional(rep.distribution, 2, {0, 1});
    rep.cond_pair = conditional(rep.distribution, 2, {1});

    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                const int idx = rep.cond_full.flat_index({i, j}, k);
                if (!rep.cond_full.defined[static_cast<size_t>(idx)]) continue;
                const Complex got = rep.cond_full.values[static_cast<size_t>(idx)];
                // Re[<c_k|b_j> <a_i|c_k> / <a_i|b_j>]
                const Complex ck_bj = (bases[2].col(k).adjoint() * bases[1].col(j))(0, 0);
                const Complex ai_ck = (bases[0].col(i).adjoint() * bases[2].col(k))(0, 0);
                const Complex ai_bj = (bases[0].col(i).adjoint() * bases[1].col(j))(0, 0);
                const double want = (ck_bj * ai_ck / ai_bj).real();
                rep.cond_formula_defect =
                    std::max(rep.cond_formula_defect, std::abs(got - Complex(want)));
                const double delta = (i == k) ? 1.0 : 0.0;
                rep.delta_defect = std::max(rep.delta_defect, std::abs(got - Complex(delta)));
            }

    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
            const int idx = rep.cond_pair.flat_index({j}, k);
            if (!rep.cond_pair.defined[static_cast<size_t>(idx)]) continue;
            rep.pair_value_defect = std::max(
                rep.pair_value_defect,
                std::abs(rep.cond_pair.values[static_cast<size_t>(idx)] - Complex(0.5)));
        }

    rep.markov = markov_check(rep.distribution);
    return rep;
}

}  // namespace qsot
