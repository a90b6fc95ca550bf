#ifndef QSOT_QUASIPROB_HPP
#define QSOT_QUASIPROB_HPP

#include <cstdint>
#include <vector>

#include "qsot/linalg.hpp"
#include "qsot/star.hpp"

namespace qsot {

class Rng;

/// Positive operator-valued measure: PSD elements summing to the identity.
struct Povm {
    int dim = 0;
    std::vector<Matrix> elements;

    Povm() = default;
    Povm(int d, std::vector<Matrix> els);

    int outcomes() const { return static_cast<int>(elements.size()); }

    /// Max entrywise defect of sum(elements) - 1; second value is the most
    /// negative element eigenvalue (>= -tol for a valid POVM).
    double completeness_defect() const;
    double min_element_eig() const;
    void validate(double tol = kTolStructural) const;
};

/// Projective measurement onto the eigenbasis of a Hermitian operator, or
/// onto an explicit orthonormal basis given as matrix columns.
Povm projective_povm(const Matrix& basis_columns);
Povm trivial_povm(int dim);

/// Complex-valued distribution over outcome tuples, one axis per time step.
/// Tuples index row-major with the leftmost axis most significant, matching
/// the SystemDims flat-index convention.
struct QuasiDistribution {
    std::vector<int> axes;        // outcome counts per time step
    std::vector<Complex> values;  // size = product(axes)

    int tuple_count() const;
    int flat_index(const std::vector<int>& tuple) const;
    std::vector<int> unflatten(int flat) const;
    Complex total() const;
};

/// Q(t_0..t_n) = Tr[q . (M^(0)_{t_0} (x) ... (x) M^(n)_{t_n})].
QuasiDistribution from_qsot(const QsotOperator& q, const std::vector<Povm>& povms);

/// Sum over the discarded axes; `keep` is a nonempty ascending axis subset.
QuasiDistribution marginal(const QuasiDistribution& qd, const std::vector<int>& keep);

/// Conditional table Q(target | given): entries with conditioning marginal of
/// modulus <= eps are flagged undefined rather than zeroed.
struct ConditionalTable {
    int target_axis = 0;
    std::vector<int> given_axes;
    std::vector<int> axes;           // given outcome counts ++ [target count]
    std::vector<Complex> values;     // given-major, target least significant
    std::vector<bool> defined;

    int flat_index(const std::vector<int>& given_tuple, int target_outcome) const;
};

ConditionalTable conditional(const QuasiDistribution& qd, int target,
                             const std::vector<int>& given, double eps = 1e-12);

struct MarkovReport {
    bool is_markov = false;
    double max_defect = 0.0;
    std::vector<int> witness;  // outcome tuple attaining the defect
    int skipped_undefined = 0;
};

/// Compares Q(x_i | x_{i-1}, ..., x_0) against Q(x_i | x_{i-1}) for every
/// i >= 2 and tuple, skipping entries with undefined conditionals.
MarkovReport markov_check(const QuasiDistribution& qd, double tol = kTolStructural,
                          double eps = 1e-12);

/// sum |Q| - 1; zero exactly for genuine probability distributions.
double negativity(const QuasiDistribution& qd);

struct NegativityReport {
    double sum_abs_minus_one = 0.0;
    double min_real = 0.0;  // most negative real part over all entries
};
NegativityReport negativity_report(const QuasiDistribution& qd);

/// Seeded random POVM with n outcomes: normalized Wishart parts
/// S^-1/2 A_i S^-1/2 with S = sum A_i.
Povm random_povm(int dim, int n_outcomes, Rng& rng);

}  // namespace qsot

#endif
