#include "qsot/quasiprob.hpp"

#include <algorithm>
#include <cmath>

#include "qsot/rng.hpp"

namespace qsot {

/*
 * Povm
 */

Povm::Povm(int d, std::vector<Matrix> els) : dim(d), elements(std::move(els)) {
    if (dim < 1) throw ValidationError("Povm: dimension must be >= 1");
    if (elements.empty()) throw ValidationError("Povm: element list must be nonempty");
    for (const auto& m : elements)
        if (m.rows() != dim || m.cols() != dim)
            throw ValidationError("Povm: element size does not match dim");
}

double Povm::completeness_defect() const {
    Matrix s = Matrix::Zero(dim, dim);
    for (const auto& m : elements) s += m;
    return (s - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

double Povm::min_element_eig() const {
    double worst = 0.0;
    for (const auto& m : elements) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
        worst = std::min(worst, es.eigenvalues().minCoeff());
    }
    return worst;
}

void Povm::validate(double tol) const {
    if (completeness_defect() > tol)
        throw ValidationError("Povm: elements do not sum to the identity");
    for (const auto& m : elements)
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol)
            throw ValidationError("Povm: element not Hermitian");
    if (min_element_eig() < -tol) throw ValidationError("Povm: element not PSD");
}

Povm projective_povm(const Matrix& basis_columns) {
    const int d = static_cast<int>(basis_columns.rows());
    std::vector<Matrix> els;
    for (Eigen::Index c = 0; c < basis_columns.cols(); ++c)
        els.push_back(basis_columns.col(c) * basis_columns.col(c).adjoint());
    return Povm(d, std::move(els));
}

Povm trivial_povm(int dim) { return Povm(dim, {Matrix::Identity(dim, dim)}); }

Povm random_povm(int dim, int n_outcomes, Rng& rng) {
    if (n_outcomes < 1) throw ValidationError("random_povm: need at least one outcome");
    std::vector<Matrix> parts;
    Matrix total = Matrix::Zero(dim, dim);
    for (int i = 0; i < n_outcomes; ++i) {
        Matrix g = rng.gaussian_matrix(dim, dim);
        parts.push_back(g * g.adjoint());
        total += parts.back();
    }
    const Matrix s_inv_sqrt =
        psd_sqrt(Operator(SystemDims{dim}, total), kTolEig).matrix().inverse();
    for (auto& p : parts) p = s_inv_sqrt * p * s_inv_sqrt;
    return Povm(dim, std::move(parts));
}

/*
 * QuasiDistribution
 */

int QuasiDistribution::tuple_count() const {
    int t = 1;
    for (int a : axes) t *= a;
    return t;
}

int QuasiDistribution::flat_index(const std::vector<int>& tuple) const {
    if (tuple.size() != axes.size())
        throw ValidationError("QuasiDistribution: tuple arity mismatch");
    int flat = 0;
    for (size_t k = 0; k < axes.size(); ++k) {
        if (tuple[k] < 0 || tuple[k] >= axes[k])
            throw ValidationError("QuasiDistribution: outcome index out of range");
        flat = flat * axes[k] + tuple[k];
    }
    return flat;
}

std::vector<int> QuasiDistribution::unflatten(int flat) const {
    std::vector<int> tuple(axes.size());
    for (size_t k = axes.size(); k-- > 0;) {
        tuple[k] = flat % axes[k];
        flat /= axes[k];
    }
    return tuple;
}

Complex QuasiDistribution::total() const {
    Complex s = 0.0;
    for (const Complex& v : values) s += v;
    return s;
}

QuasiDistribution from_qsot(const QsotOperator& q, const std::vector<Povm>& povms) {
    const auto& dims = q.op.dims().dims;
    if (povms.size() != dims.size())
        throw ValidationError("from_qsot: need one POVM per tensor factor (" +
                              std::to_string(dims.size()) + " factors, " +
                              std::to_string(povms.size()) + " POVMs)");
    for (size_t k = 0; k < dims.size(); ++k)
        if (povms[k].dim != dims[k])
            throw ValidationError("from_qsot: POVM dim mismatch on axis " + std::to_string(k));

    QuasiDistribution qd;
    for (const auto& p : povms) qd.axes.push_back(p.outcomes());
    qd.values.resize(static_cast<size_t>(qd.tuple_count()));
    for (int flat = 0; flat < qd.tuple_count(); ++flat) {
        const std::vector<int> tuple = qd.unflatten(flat);
        Matrix effect = povms[0].elements[static_cast<size_t>(tuple[0])];
        for (size_t k = 1; k < povms.size(); ++k)
            effect = kron(effect, povms[k].elements[static_cast<size_t>(tuple[k])]);
        qd.values[static_cast<size_t>(flat)] = (q.op.matrix() * effect).trace();
    }
    return qd;
}

QuasiDistribution marginal(const QuasiDistribution& qd, const std::vector<int>& keep) {
    if (keep.empty()) throw ValidationError("marginal: keep set must be nonempty");
    std::vector<int> sorted = keep;
    std::sort(sorted.begin(), sorted.end());
    for (size_t k = 0; k < sorted.size(); ++k) {
        if (sorted[k] < 0 || sorted[k] >= static_cast<int>(qd.axes.size()))
            throw ValidationError("marginal: axis out of range");
        if (k > 0 && sorted[k] == sorted[k - 1])
            throw ValidationError("marginal: duplicate axis");
    }

    QuasiDistribution out;
    for (int k : sorted) out.axes.push_back(qd.axes[static_cast<size_t>(k)]);
    out.values.assign(static_cast<size_t>(out.tuple_count()), Complex(0.0));
    for (int flat = 0; flat < qd.tuple_count(); ++flat) {
        const std::vector<int> tuple = qd.unflatten(flat);
        std::vector<int> sub;
        sub.reserve(sorted.size());
        for (int k : sorted) sub.push_back(tuple[static_cast<size_t>(k)]);
        out.values[static_cast<size_t>(out.flat_index(sub))] += qd.values[static_cast<size_t>(flat)];
    }
    return out;
}

/*
 * Conditionals and Markovianity
 */

int ConditionalTable::flat_index(const std::vector<int>& given_tuple, int target_outcome) const {
    int flat = 0;
    for (size_t k = 0; k < given_axes.size(); ++k) flat = flat * axes[k] + given_tuple[k];
    return flat * axes.back() + target_outcome;
}

ConditionalTable conditional(const QuasiDistribution& qd, int target,
                             const std::vector<int>& given, double eps) {
    for (int g : given)
        if (g == target) throw ValidationError("conditional: target axis cannot be conditioned on");

    std::vector<int> joint_axes = given;
    std::sort(joint_axes.begin(), joint_axes.end());
    std::vector<int> joint_keep = joint_axes;
    joint_keep.push_back(target);
    std::sort(joint_keep.begin(), joint_keep.end());

    const QuasiDistribution joint = marginal(qd, joint_keep);
    const QuasiDistribution denom = marginal(qd, joint_axes);

    ConditionalTable table;
    table.target_axis = target;
    table.given_axes = joint_axes;
    for (int g : joint_axes) table.axes.push_back(qd.axes[static_cast<size_t>(g)]);
    table.axes.push_back(qd.axes[static_cast<size_t>(target)]);
    int count = 1;
    for (int a : table.axes) count *= a;
    table.values.assign(static_cast<size_t>(count), Complex(0.0));
    table.defined.assign(static_cast<size_t>(count), false);

    // Position of the target inside the sorted joint marginal.
    size_t target_pos = 0;
    while (joint_keep[target_pos] != target) ++target_pos;

    for (int flat = 0; flat < joint.tuple_count(); ++flat) {
        const std::vector<int> jt = joint.unflatten(flat);
        std::vector<int> gt;
        for (size_t k = 0; k < jt.size(); ++k)
            if (k != target_pos) gt.push_back(jt[k]);
        const Complex den = denom.values[static_cast<size_t>(denom.flat_index(gt))];
        const int out_idx = table.flat_index(gt, jt[target_pos]);
        if (std::abs(den) <= eps) continue;  // flagged undefined, not zero
        table.values[static_cast<size_t>(out_idx)] = joint.values[static_cast<size_t>(flat)] / den;
        table.defined[static_cast<size_t>(out_idx)] = true;
    }
    return table;
}

MarkovReport markov_check(const QuasiDistribution& qd, double tol, double eps) {
    const int n_axes = static_cast<int>(qd.axes.size());
    if (n_axes < 3) throw ValidationError("markov_check: need at least 3 axes");

    MarkovReport rep;
    rep.is_markov = true;
    for (int i = 2; i < n_axes; ++i) {
        std::vector<int> past;  // x_0 .. x_{i-1}
        for (int k = 0; k < i; ++k) past.push_back(k);
        const ConditionalTable full = conditional(qd, i, past, eps);
        const ConditionalTable pair = conditional(qd, i, {i - 1}, eps);

        const QuasiDistribution head = marginal(qd, [&] {
            std::vector<int> k = past;
            k.push_back(i);
            return k;
        }());
        for (int flat = 0; flat < head.tuple_count(); ++flat) {
            const std::vector<int> tuple = head.unflatten(flat);
            const int xi = tuple.back();
            std::vector<int> gt(tuple.begin(), tuple.end() - 1);
            const int fi = full.flat_index(gt, xi);
            const int pi = pair.flat_index({tuple[static_cast<size_t>(i - 1)]}, xi);
            if (!full.defined[static_cast<size_t>(fi)] || !pair.defined[static_cast<size_t>(pi)]) {
                ++rep.skipped_undefined;
                continue;
            }
            const double defect = std::abs(full.values[static_cast<size_t>(fi)] -
                                           pair.values[static_cast<size_t>(pi)]);
            if (defect > rep.max_defect) {
                rep.max_defect = defect;
                rep.witness = tuple;
            }
        }
    }
    rep.is_markov = rep.max_defect <= tol;
    return rep;
}

double negativity(const QuasiDistribution& qd) {
    double s = 0.0;
    for (const Complex& v : qd.values) s += std::abs(v);
    return s - 1.0;
}

NegativityReport negativity_report(const QuasiDistribution& qd) {
    NegativityReport rep;
    rep.sum_abs_minus_one = negativity(qd);
    rep.min_real = 0.0;
    for (const Complex& v : qd.values) rep.min_real = std::min(rep.min_real, v.real());
    return rep;
}

}  // namespace qsot
