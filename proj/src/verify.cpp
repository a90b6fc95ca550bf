#include "qsot/verify.hpp"

#include <algorithm>
#include <cmath>

#include "qsot/channels.hpp"
#include "qsot/quasiprob.hpp"
#include "qsot/rng.hpp"
#include "qsot/scenarios.hpp"
#include "qsot/snapshot.hpp"
#include "qsot/star.hpp"

namespace qsot {

namespace {

struct Instance {
    ChannelChain chain;
    Operator rho;
};

// Random composable chain with n in {1,2,3}, local dims in {2,3}.
Instance random_instance(Rng& rng, int max_len = 3) {
    const int n = 1 + static_cast<int>(rng.raw() % static_cast<uint64_t>(max_len));
    std::vector<int> dims;
    for (int k = 0; k <= n; ++k) dims.push_back(2 + static_cast<int>(rng.raw() % 2));
    std::vector<QuantumChannel> chs;
    for (int k = 0; k < n; ++k)
        chs.push_back(random_channel(dims[static_cast<size_t>(k)],
                                     dims[static_cast<size_t>(k + 1)], rng.raw()));
    Operator rho(SystemDims{dims[0]}, rng.random_density(dims[0]));
    return {ChannelChain(std::move(chs)), std::move(rho)};
}

std::string random_bits(Rng& rng, int n) {
    std::string bits;
    for (int k = 0; k < n; ++k) bits.push_back((rng.raw() & 1) ? 'L' : 'R');
    return bits;
}

class Suite {
public:
    explicit Suite(const VerifyOptions& options) : opt_(options) {}

    std::vector<InvariantResult> run() {
        definition1_marginals();
        qsot_structure();
        iterativity();
        conditionability_nchain();
        rendering_maps();
        snapshot_factorization();
        born_marginals();
        expectation_axioms();
        structural_lemmas();
        ls_pathology();
        negativity_witness();
        holistic_nonuniqueness();
        markov_probes();
        return results_;
    }

private:
    void record(const std::string& name, double value, double threshold,
                const std::string& compare = "le") {
        InvariantResult r;
        r.name = name;
        r.value = value;
        if (compare == "le" && opt_.tol_override > 0.0) threshold = opt_.tol_override;
        r.threshold = threshold;
        r.compare = compare;
        r.pass = compare == "le" ? value <= threshold : value >= threshold;
        results_.push_back(std::move(r));
    }

    Rng trial_rng(uint64_t salt, int trial) const {
        return Rng(splitmix64(opt_.seed ^ splitmix64(salt + static_cast<uint64_t>(trial))));
    }

    int trials() const { return opt_.trials; }

    // Definition 1: recursive marginal conditions for every produced QSOT.
    void definition1_marginals() {
        double worst = 0.0;
        for (int t = 0; t < trials(); ++t) {
            Rng rng = trial_rng(0x01, t);
            Instance in = random_instance(rng);
            for (StarKind kind : {StarKind::FP, StarKind::Left, StarKind::Right}) {
                QsotOperator q = star_nchain(kind, in.chain, in.rho);
                if (opt_.sabotage == "marginal") {
                    Matrix m = q.op.matrix();
                    m(0, 0) += 0.1;
                    q.op = Operator(q.op.dims(), std::move(m));
                }
                worst = std::max(worst, marginal_check(q, in.chain, in.rho).max_defect);
            }
            const QsotOperator h =
                star_nchain_holistic(random_bits(rng, in.chain.size()), in.chain, in.rho);
            worst = std::max(worst, marginal_check(h, in.chain, in.rho).max_defect);
        }
        record("definition1-marginals", worst, 1e-10);
    }

    // FP QSOTs Hermitian and unit trace; Left/Right unit trace and mutual adjoints.
    void qsot_structure() {
        double worst = 0.0;
        for (int t = 0; t < trials(); ++t) {
            Rng rng = trial_rng(0x02, t);
            Instance in = random_instance(rng);
            const Operator fp = star_nchain_op(StarKind::FP, in.chain, in.rho);
            const Operator l = star_nchain_op(StarKind::Left, in.chain, in.rho);
            const Operator r = star_nchain_op(StarKind::Right, in.chain, in.rho);
            worst = std::max(worst, fp.hermitian_defect());
            worst = std::max(worst, std::abs(fp.trace() - Complex(1.0)));
            worst = std::max(worst, std::abs(l.trace() - Complex(1.0)));
            worst = std::max(worst, std::abs(r.trace() - Complex(1.0)));
            worst = std::max(worst, max_abs_diff(Matrix(l.matrix().adjoint()), r.matrix()));
        }
        record("qsot-structure", worst, 1e-12);
    }

    // Iterative extension: the n-chain product equals the bloom of the last
    // channel applied to the (n-1)-chain product.
    void iterativity() {
        double worst = 0.0;
        for (int t = 0; t < trials(); ++t) {
            Rng rng = trial_rng(0x03, t);
            Instance in = random_instance(rng);
            if (in.chain.size() < 2) continue;
            for (StarKind kind : {StarKind::FP, StarKind::Left, StarKind::Right}) {
                const Operator whole = star_nchain_op(kind, in.chain, in.rho);
                const Operator head = star_nchain_op(kind, in.chain.truncate_above(), in.rho);
                const Operator grown =
                    apply_on_last(bloom_map(kind, in.chain.channels.back()), head);
                worst = std::max(worst, max_abs_diff(whole, grown));
            }
        }
        record("iterativity", worst, 1e-12);
    }

    // chain * rho = (Theta_rho (x) id)(chain * 1) on n-chains.
    void conditionability_nchain() {
        double worst = 0.0;
        for (int t = 0; t < trials(); ++t) {
            Rng rng = trial_rng(0x04, t);
            Instance in = random_instance(rng);
            for (StarKind kind : {StarKind::FP, StarKind::Left, StarKind::Right}) {
                const Operator lhs = star_nchain_op(kind, in.chain, in.rho);
                const Operator star_one = star_nchain_op(
                    kind, in.chain, Operator::identity(SystemDims{in.chain.in_dim()}));
                const Operator rhs =
                    apply_on_first(state_rendering_map(kind, in.rho).map, star_one);
                worst = std::max(worst, max_abs_diff(lhs, rhs));
            }
        }
        record("conditionability-nchain", worst, 1e-10);
    }

    // Theta_1 = id and double-dagger involution.
    void rendering_maps() {
        double worst = 0.0;
        for (int t = 0; t < trials(); ++t) {
            Rng rng = trial_rng(0x05, t);
            const int d = 2 + static_cast<int>(rng.raw() % 2);
            for (StarKind kind : {StarKind::FP, StarKind::Left, StarKind::Right}) {
                const OperatorMap theta_one =
                    state_rendering_map(kind, Operator::identity(SystemDims{d})).map;
                worst = std::max(worst, max_abs_diff(theta_one.matrix(),
                                                     OperatorMap::identity(SystemDims{d}).matrix()));
                const OperatorMap theta =
                    state_rendering_map(kind, Operator(SystemDims{d}, rng.random_density(d))).map;
                const OperatorMap twice = double_dagger(double_dagger(theta));
                worst = std::max(worst, max_abs_diff(twice.matrix(), theta.matrix()));
            }
        }
        record("rendering-maps", worst, 1e-12);
    }

    void snapshot_factorization() {
        double worst = 0.0;
        const int n = std::max(trials() * 2, trials());
        for (StarKind kind : {StarKind::FP, StarKind::Left, StarKind::Right})
            worst = std::max(worst,
                             factorization_defect(kind, splitmix64(opt_.seed ^ 0x06), n));
        record("snapshot-factorization", worst, 1e-10);
    }

    // Single-axis marginals match channel-propagated Born probabilities; the
    // total sums to one; marginals are real and nonnegative.
    void born_marginals() {
        double worst = 0.0;
        for (int t = 0; t < trials(); ++t) {
            Rng rng = trial_rng(0x07, t);
            Instance in = random_instance(rng);
            const SystemDims sys = in.chain.system_dims();
            std::vector<Povm> povms;
            for (int k = 0; k < sys.count(); ++k)
                povms.push_back(random_povm(sys.dim(k), 2 + static_cast<int>(rng.raw() % 2), rng));
            for (StarKind kind : {StarKind::FP, StarKind::Left}) {
                const QuasiDistribution qd =
                    from_qsot(star_nchain(kind, in.chain, in.rho), povms);
                worst = std::max(worst, std::abs(qd.total() - Complex(1.0)));
                Matrix propagated = in.rho.matrix();
                for (int axis = 0; axis < sys.count(); ++axis) {
                    if (axis > 0)
                        propagated =
                            apply_matrix(in.chain.channels[static_cast<size_t>(axis - 1)], propagated);
                    const QuasiDistribution m = marginal(qd, {axis});
                    for (int o = 0; o < m.tuple_count(); ++o) {
                        const Complex got = m.values[static_cast<size_t>(o)];
                        const double born =
                            (propagated * povms[static_cast<size_t>(axis)]
                                              .elements[static_cast<size_t>(o)])
                                .trace()
                                .real();
                        worst = std::max(worst, std::abs(got - Complex(born)));
                        worst = std::max(worst, std::abs(got.imag()));
                        worst = std::max(worst, std::max(0.0, -got.real()));
                    }
                }
            }
        }
        record("born-marginals", worst, 1e-10);
    }

    // Expectation values are linear in each observable and collapse to the
    // truncated chain when an end observable is the identity.
    void expectation_axioms() {
        double worst = 0.0;
        for (int t = 0; t < trials(); ++t) {
            Rng rng = trial_rng(0x08, t);
            Instance in = random_instance(rng);
            const SystemDims sys = in.chain.system_dims();
            ObservableChain obs;
            for (int k = 0; k < sys.count(); ++k)
                obs.observables.emplace_back(SystemDims{sys.dim(k)},
                                             rng.random_hermitian(sys.dim(k)));
            for (StarKind kind : {StarKind::FP, StarKind::Left}) {
                // multilinearity at a random slot
                const int slot = static_cast<int>(rng.raw() % static_cast<uint64_t>(sys.count()));
                const double a = rng.gaussian(), b = rng.gaussian();
                ObservableChain oa = obs, ob = obs, oc = obs;
                const Matrix ma = rng.random_hermitian(sys.dim(slot));
                const Matrix mb = rng.random_hermitian(sys.dim(slot));
                oa.observables[static_cast<size_t>(slot)] =
                    Operator(SystemDims{sys.dim(slot)}, ma);
                ob.observables[static_cast<size_t>(slot)] =
                    Operator(SystemDims{sys.dim(slot)}, mb);
                oc.observables[static_cast<size_t>(slot)] =
                    Operator(SystemDims{sys.dim(slot)}, a * ma + b * mb);
                const Complex lhs = expectation_direct(kind, in.chain, in.rho, oc);
                const Complex rhs = a * expectation_direct(kind, in.chain, in.rho, oa) +
                                    b * expectation_direct(kind, in.chain, in.rho, ob);
                worst = std::max(worst, std::abs(lhs - rhs));

                // normalization reductions at both ends
                ObservableChain front = obs;
                front.observables.front() = Operator::identity(SystemDims{sys.dim(0)});
                const Complex red_front = expectation_direct(kind, in.chain, in.rho, front);
                ObservableChain back = obs;
                back.observables.back() =
                    Operator::identity(SystemDims{sys.dim(sys.count() - 1)});
                const Complex red_back = expectation_direct(kind, in.chain, in.rho, back);

                Complex want_front, want_back;
                const Operator rho1 = apply(in.chain.channels.front(), in.rho);
                if (in.chain.size() == 1) {
                    want_front = (obs.observables.back().matrix() * rho1.matrix()).trace();
                    want_back = (obs.observables.front().matrix() * in.rho.matrix()).trace();
                } else {
                    ObservableChain tail;
                    tail.observables.assign(obs.observables.begin() + 1, obs.observables.end());
                    want_front =
                        expectation_direct(kind, in.chain.truncate_below(), rho1, tail);
                    ObservableChain head;
                    head.observables.assign(obs.observables.begin(), obs.observables.end() - 1);
                    want_back =
                        expectation_direct(kind, in.chain.truncate_above(), in.rho, head);
                }
                worst = std::max(worst, std::abs(red_front - want_front));
                worst = std::max(worst, std::abs(red_back - want_back));
            }
        }
        record("expectation-axioms", worst, 1e-10);
    }

    // Invertibility of Phi^(id), Theta linearity, double-dagger defining
    // identity, and the conditionability -> broadcasting ordering.
    void structural_lemmas() {
        double worst = 0.0;
        bool hierarchy = true;
        double rank_gap = 1.0;
        for (int t = 0; t < std::min(trials(), 8); ++t) {
            Rng rng = trial_rng(0x09, t);
            const int d = 2 + static_cast<int>(rng.raw() % 2);
            for (StarKind kind : {StarKind::FP, StarKind::Left, StarKind::Right}) {
                const OperatorMap phi =
                    jamiolkowski_map(kind, ChannelChain({identity_channel(d)}));
                const Eigen::JacobiSVD<Matrix> svd(phi.matrix());
                rank_gap = std::min(
                    rank_gap, svd.singularValues().minCoeff() / svd.singularValues().maxCoeff());

                const Matrix r1 = rng.random_density(d);
                const Matrix r2 = rng.random_density(d);
                const double a = rng.gaussian(), b = rng.gaussian();
                const Operator mix(SystemDims{d}, a * r1 + b * r2);
                const OperatorMap tm = state_rendering_map(kind, mix).map;
                const OperatorMap t1 =
                    state_rendering_map(kind, Operator(SystemDims{d}, r1)).map;
                const OperatorMap t2 =
                    state_rendering_map(kind, Operator(SystemDims{d}, r2)).map;
                worst = std::max(worst, max_abs_diff(tm.matrix(),
                                                     (Complex(a) * t1 + Complex(b) * t2).matrix()));

                // (Theta (x) id)(SWAP) = (id (x) Theta'')(SWAP)
                const Operator sw = swap_operator(d);
                const OperatorMap dd = double_dagger(t1);
                worst = std::max(worst, max_abs_diff(apply_on_first(t1, sw),
                                                     apply_on_last(dd, sw)));
            }
        }
        for (StarKind kind : {StarKind::FP, StarKind::Left, StarKind::Right}) {
            const StructuralReport rep =
                structural_probe(kind, splitmix64(opt_.seed ^ 0x0a), std::min(trials(), 25));
            worst = std::max(worst, rep.broadcasting_defect);
            worst = std::max(worst, rep.conditionability_defect);
            worst = std::max(worst, rep.decomposability_defect);
            hierarchy = hierarchy && rep.hierarchy_ok;
        }
        record("lemma-theta-doubledagger", worst, 1e-10);
        record("lemma-phi-id-invertible", trials() == 0 ? 1.0 : rank_gap, 1e-6, "ge");
        record("lemma-hierarchy", hierarchy ? 0.0 : 1.0, 0.5);
    }

    void ls_pathology() {
        const StructuralReport rep =
            structural_probe(StarKind::LS, splitmix64(opt_.seed ^ 0x0b), std::min(trials(), 25));
        record("ls-broadcasting", rep.broadcasting_defect, 1e-10);
        if (trials() == 0) {
            record("ls-linearity-gap", 1.0, 1e-2, "ge");
            return;
        }
        Matrix plus(2, 2);
        plus << 0.5, 0.5, 0.5, 0.5;
        Matrix zero(2, 2);
        zero << 1, 0, 0, 0;
        const double gap = ls_linearity_gap(Operator(SystemDims{2}, zero),
                                            Operator(SystemDims{2}, plus), identity_channel(2));
        record("ls-linearity-gap", gap, 1e-2, "ge");
    }

    void negativity_witness() {
        if (trials() == 0) {
            record("negativity-witness", 0.0, 1e-9);
            return;
        }
        Matrix zero(2, 2);
        zero << 1, 0, 0, 0;
        const Operator q =
            star_1chain_op(StarKind::FP, identity_channel(2), Operator(SystemDims{2}, zero));
        const std::vector<double> spec = hermitian_spectrum(q);
        const std::vector<double> want{1.0, 0.5, 0.0, -0.5};
        double worst = 0.0;
        for (size_t k = 0; k < want.size(); ++k)
            worst = std::max(worst, std::abs(spec[k] - want[k]));
        record("negativity-witness", worst, 1e-9);
    }

    void holistic_nonuniqueness() {
        if (trials() == 0) {
            record("holistic-1chain-fp", 0.0, 1e-12);
            record("holistic-2chain-differ", 1.0, 1e-6, "ge");
            return;
        }
        double reduce = 0.0;
        for (int t = 0; t < std::min(trials(), 10); ++t) {
            Rng rng = trial_rng(0x0c, t);
            Instance in = random_instance(rng, 1);
            const Operator fp = star_nchain_op(StarKind::FP, in.chain, in.rho);
            for (const char* bits : {"L", "R"})
                reduce = std::max(
                    reduce, max_abs_diff(star_nchain_holistic(bits, in.chain, in.rho).op, fp));
        }
        record("holistic-1chain-fp", reduce, 1e-12);

        Matrix plus(2, 2);
        plus << 0.5, 0.5, 0.5, 0.5;
        const ChannelChain idid({identity_channel(2), identity_channel(2)});
        const Operator rho(SystemDims{2}, plus);
        const double differ =
            max_abs_diff(star_nchain_holistic("LL", idid, rho).op,
                         star_nchain_holistic("LR", idid, rho).op);
        record("holistic-2chain-differ", differ, 1e-6, "ge");
    }

    // Classical Markov chains embedded diagonally stay Markovian; the
    // standard mutually-unbiased demo has defect exactly 1/2.
    void markov_probes() {
        double worst = 0.0;
        for (int t = 0; t < std::min(trials(), 10); ++t) {
            Rng rng = trial_rng(0x0d, t);
            // random classical 2-state Markov chain over 3 times
            double p0 = rng.uniform();
            double a = rng.uniform(), b = rng.uniform();
            QuasiDistribution qd;
            qd.axes = {2, 2, 2};
            qd.values.resize(8);
            auto trans = [&](int x, int y) {
                const double stay = x == 0 ? a : b;
                return y == x ? stay : 1.0 - stay;
            };
            for (int x0 = 0; x0 < 2; ++x0)
                for (int x1 = 0; x1 < 2; ++x1)
                    for (int x2 = 0; x2 < 2; ++x2)
                        qd.values[static_cast<size_t>(qd.flat_index({x0, x1, x2}))] =
                            (x0 == 0 ? p0 : 1.0 - p0) * trans(x0, x1) * trans(x1, x2);
            const MarkovReport rep = markov_check(qd);
            worst = std::max(worst, rep.max_defect);
        }
        record("markov-classical", worst, 1e-10);

        if (trials() > 0) {
            const NonMarkovReport demo = nonmarkov_demo();
            record("markov-mub-defect", std::abs(demo.markov.max_defect - 0.5), 1e-12);
        } else {
            record("markov-mub-defect", 0.0, 1e-12);
        }
    }

    VerifyOptions opt_;
    std::vector<InvariantResult> results_;
};

}  // namespace

std::vector<InvariantResult> run_verification(const VerifyOptions& options) {
    if (!options.sabotage.empty() && options.sabotage != "marginal")
        throw ValidationError("unknown sabotage target '" + options.sabotage + "'");
    return Suite(options).run();
}

bool all_pass(const std::vector<InvariantResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const InvariantResult& r) { return r.pass; });
}

}  // namespace qsot
