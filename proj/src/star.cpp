#include "qsot/star.hpp"

#include <algorithm>
#include <cmath>

#include "qsot/rng.hpp"

namespace qsot {

bool is_state_linear(StarKind kind) {
    return kind == StarKind::Left || kind == StarKind::Right || kind == StarKind::FP;
}

std::string star_kind_name(StarKind kind) {
    switch (kind) {
        case StarKind::Left: return "left";
        case StarKind::Right: return "right";
        case StarKind::FP: return "fp";
        case StarKind::LS: return "ls";
    }
    return "?";
}

StarKind star_kind_from_name(const std::string& name) {
    if (name == "left") return StarKind::Left;
    if (name == "right") return StarKind::Right;
    if (name == "fp") return StarKind::FP;
    if (name == "ls") return StarKind::LS;
    throw ValidationError("unknown star kind '" + name + "' (expected fp|left|right|ls)");
}

ExtensionPolicy ExtensionPolicy::make_holistic(std::string bits) {
    if (bits.empty()) throw ValidationError("holistic policy: bit string must be nonempty");
    for (char c : bits)
        if (c != 'L' && c != 'R')
            throw ValidationError("holistic policy: bits must be over {L, R}");
    ExtensionPolicy p;
    p.markovian = false;
    p.bits = std::move(bits);
    return p;
}

/*
 * 1-chain products
 */

namespace {

Operator star_1chain_from_jam(StarKind kind, const Operator& jam, const Operator& rho) {
    const int da = rho.dim();
    const int db = jam.dim() / da;
    const Matrix rho_ext = kron(rho.matrix(), Matrix::Identity(db, db));
    Matrix out;
    switch (kind) {
        case StarKind::Left: out = rho_ext * jam.matrix(); break;
        case StarKind::Right: out = jam.matrix() * rho_ext; break;
        case StarKind::FP:
            out = 0.5 * (rho_ext * jam.matrix() + jam.matrix() * rho_ext);
            break;
        case StarKind::LS: {
            const Matrix s = psd_sqrt(rho.flattened()).matrix();
            const Matrix s_ext = kron(s, Matrix::Identity(db, db));
            out = s_ext * jam.matrix() * s_ext;
            break;
        }
    }
    return Operator(SystemDims{da}.concat(SystemDims{db}), std::move(out));
}

}  // namespace

Operator star_1chain_op(StarKind kind, const QuantumChannel& e, const Operator& rho) {
    if (rho.dims().total() != e.in_dim)
        throw ValidationError("star_1chain: state dim " + std::to_string(rho.dims().total()) +
                              " does not match channel input dim " + std::to_string(e.in_dim));
    if (kind == StarKind::LS && !rho.is_psd(kTolEig))
        throw ValidationError("star_1chain: LS product requires a PSD state");
    return star_1chain_from_jam(kind, jamiolkowski(e), rho);
}

QsotOperator star_1chain(StarKind kind, const QuantumChannel& e, const Operator& rho) {
    return {star_1chain_op(kind, e, rho), kind, ExtensionPolicy::make_markovian()};
}

OperatorMap bloom_map(StarKind kind, const QuantumChannel& e) {
    if (!is_state_linear(kind))
        throw ValidationError("bloom_map: kind must be state-linear");
    const Operator jam = jamiolkowski(e);
    return OperatorMap::from_action(
        SystemDims{e.in_dim}, SystemDims{e.in_dim, e.out_dim}, [&](const Matrix& x) {
            return star_1chain_from_jam(kind, jam, Operator(SystemDims{e.in_dim}, x)).matrix();
        });
}

/*
 * n-chain extensions
 */

namespace {

// Iterate per-step blooms over the chain; kinds[k] picks the product used at
// step k (all entries equal for the Markovian extension).
Operator iterate_blooms(const std::vector<StarKind>& kinds, const ChannelChain& chain,
                        const Operator& rho) {
    Operator q = star_1chain_op(kinds[0], chain.channels[0], rho);
    for (size_t k = 1; k < chain.channels.size(); ++k)
        q = apply_on_last(bloom_map(kinds[k], chain.channels[k]), q);
    return q;
}

void require_composable(const ChannelChain& chain, const Operator& rho) {
    if (rho.dims().total() != chain.in_dim())
        throw ValidationError("star_nchain: state dim does not match chain input dim");
}

}  // namespace

Operator star_nchain_op(StarKind kind, const ChannelChain& chain, const Operator& rho) {
    if (kind == StarKind::LS)
        throw ValidationError("LS has no multipartite extension");
    require_composable(chain, rho);
    return iterate_blooms(std::vector<StarKind>(static_cast<size_t>(chain.size()), kind), chain,
                          rho);
}

QsotOperator star_nchain(StarKind kind, const ChannelChain& chain, const Operator& rho) {
    return {star_nchain_op(kind, chain, rho), kind, ExtensionPolicy::make_markovian()};
}

QsotOperator star_nchain_holistic(const std::string& bits, const ChannelChain& chain,
                                  const Operator& rho) {
    if (static_cast<int>(bits.size()) != chain.size())
        throw ValidationError("holistic product: bit string length " +
                              std::to_string(bits.size()) + " does not match chain length " +
                              std::to_string(chain.size()));
    require_composable(chain, rho);
    const ExtensionPolicy policy = ExtensionPolicy::make_holistic(bits);
    std::vector<StarKind> kinds, comp;
    for (char c : bits) {
        kinds.push_back(c == 'L' ? StarKind::Left : StarKind::Right);
        comp.push_back(c == 'L' ? StarKind::Right : StarKind::Left);
    }
    Operator a = iterate_blooms(kinds, chain, rho);
    Operator b = iterate_blooms(comp, chain, rho);
    return {Operator(a.dims(), 0.5 * (a.matrix() + b.matrix())), StarKind::FP, policy};
}

/*
 * Marginal conditions (the two defining identities, applied recursively)
 */

namespace {

Operator rebuild(const StarKind kind, const ExtensionPolicy& policy, const ChannelChain& chain,
                 const Operator& rho) {
    if (policy.markovian) return star_nchain_op(kind, chain, rho);
    return star_nchain_holistic(policy.bits, chain, rho).op;
}

void marginal_check_rec(const Operator& q, const StarKind kind, const ExtensionPolicy& policy,
                        const ChannelChain& chain, const Operator& rho, double& worst) {
    const int n = chain.size();
    std::vector<int> keep_tail, keep_head;
    for (int k = 1; k <= n; ++k) keep_tail.push_back(k);
    for (int k = 0; k < n; ++k) keep_head.push_back(k);

    const Operator tr_first = partial_trace(q, keep_tail);
    const Operator tr_last = partial_trace(q, keep_head);

    const Operator rho_next = apply(chain.channels[0], rho);
    if (n == 1) {
        worst = std::max(worst, max_abs_diff(tr_first, rho_next.flattened()));
        worst = std::max(worst, max_abs_diff(tr_last, rho.flattened()));
        return;
    }

    ExtensionPolicy below = policy, above = policy;
    if (!policy.markovian) {
        below.bits = policy.bits.substr(1);
        above.bits = policy.bits.substr(0, policy.bits.size() - 1);
    }
    const ChannelChain chain_below = chain.truncate_below();
    const ChannelChain chain_above = chain.truncate_above();

    const Operator want_first = rebuild(kind, below, chain_below, rho_next);
    const Operator want_last = rebuild(kind, above, chain_above, rho);
    worst = std::max(worst, max_abs_diff(tr_first, want_first));
    worst = std::max(worst, max_abs_diff(tr_last, want_last));

    marginal_check_rec(tr_first, kind, below, chain_below, rho_next, worst);
    marginal_check_rec(tr_last, kind, above, chain_above, rho, worst);
}

}  // namespace

MarginalReport marginal_check(const QsotOperator& q, const ChannelChain& chain,
                              const Operator& rho, double tol) {
    if (q.op.dims() != chain.system_dims())
        throw ValidationError("marginal_check: QSOT dims do not match chain system dims");
    MarginalReport rep;
    marginal_check_rec(q.op, q.kind, q.policy, chain, rho, rep.max_defect);
    rep.ok = rep.max_defect <= tol;
    return rep;
}

/*
 * Structural maps
 */

StateRenderingMap state_rendering_map(StarKind kind, const Operator& rho) {
    if (!is_state_linear(kind))
        throw ValidationError("state_rendering_map: LS product is not conditionable");
    const SystemDims d{rho.dim()};
    const Matrix& r = rho.matrix();
    OperatorMap map = OperatorMap::from_action(d, d, [&](const Matrix& x) -> Matrix {
        switch (kind) {
            case StarKind::Left: return r * x;
            case StarKind::Right: return x * r;
            default: return 0.5 * (r * x + x * r);
        }
    });
    return {kind, rho, std::move(map)};
}

OperatorMap double_dagger(const OperatorMap& theta) {
    if (theta.in_dims().total() != theta.out_dims().total())
        throw ValidationError("double_dagger: map must be square");
    const int d = theta.in_dims().total();
    const Operator sw = swap_operator(d);
    // J[Theta] = (id (x) Theta)(SWAP); gamma conjugates by SWAP.
    const Operator jm = apply_on_last(theta, sw);
    const Matrix swapped = sw.matrix() * jm.matrix() * sw.matrix();
    return inverse_jamiolkowski(Operator(sw.dims(), swapped), SystemDims{d}, SystemDims{d});
}

OperatorMap jamiolkowski_map(StarKind kind, const ChannelChain& chain) {
    if (!is_state_linear(kind))
        throw ValidationError("jamiolkowski_map: kind must be state-linear");
    const int d0 = chain.in_dim();
    const Operator q = star_nchain_op(kind, chain, Operator::identity(SystemDims{d0}));
    std::vector<int> tail;
    for (const auto& c : chain.channels) tail.push_back(c.out_dim);
    return inverse_jamiolkowski(q, SystemDims{d0}, SystemDims(std::move(tail)));
}

/*
 * Randomized structural probe
 */

StructuralReport structural_probe(StarKind kind, uint64_t seed, int trials, double tol) {
    StructuralReport rep;
    rep.trials = trials;
    rep.has_conditionability = is_state_linear(kind);
    rep.hierarchy_ok = true;
    rep.decomposability_ok = true;
    for (int t = 0; t < trials; ++t) {
        Rng rng(splitmix64(seed + static_cast<uint64_t>(t)));
        const int da = 2 + static_cast<int>(rng.raw() % 2);
        const int db = 2 + static_cast<int>(rng.raw() % 2);
        const QuantumChannel e = random_channel(da, db, rng.raw());
        const Operator rho(SystemDims{da}, rng.random_density(da));

        const Operator lhs = star_1chain_op(kind, e, rho);

        // broadcasting: E * rho = (id (x) E)(id * rho)
        const Operator idstar = star_1chain_op(kind, identity_channel(da), rho);
        const Operator rhs_b = apply_on_last(channel_map(e), idstar);
        const double bd = max_abs_diff(lhs, rhs_b);
        rep.broadcasting_defect = std::max(rep.broadcasting_defect, bd);

        if (!rep.has_conditionability) continue;

        // conditionability: E * rho = (Theta_rho (x) id)(E * 1)
        const Operator star_one = star_1chain_op(kind, e, Operator::identity(SystemDims{da}));
        const Operator rhs_c = apply_on_first(state_rendering_map(kind, rho).map, star_one);
        const double cd = max_abs_diff(lhs, rhs_c);
        rep.conditionability_defect = std::max(rep.conditionability_defect, cd);

        // decomposability: E * rho = (Theta_rho (x) Phi^(E))(SWAP)
        const OperatorMap phi = jamiolkowski_map(kind, ChannelChain({e}));
        const OperatorMap theta = state_rendering_map(kind, rho).map;
        Matrix rhs_d = Matrix::Zero(da * db, da * db);
        Matrix basis = Matrix::Zero(da, da);
        for (int i = 0; i < da; ++i)
            for (int j = 0; j < da; ++j) {
                basis(i, j) = 1.0;
                const Matrix ti = theta.apply_matrix(basis);
                basis(i, j) = 0.0;
                basis(j, i) = 1.0;
                const Matrix pj = phi.apply_matrix(basis);
                basis(j, i) = 0.0;
                rhs_d += kron(ti, pj);
            }
        const double dd = max_abs_diff(lhs.matrix(), rhs_d);
        rep.decomposability_defect = std::max(rep.decomposability_defect, dd);
        if (dd > tol) rep.decomposability_ok = false;

        // Lemma hierarchy: conditionability holding forces broadcasting.
        if (cd <= tol && bd > tol) rep.hierarchy_ok = false;
    }
    return rep;
}

double ls_linearity_gap(const Operator& rho, const Operator& sigma, const QuantumChannel& e) {
    if (rho.dims().total() != sigma.dims().total())
        throw ValidationError("ls_linearity_gap: state dims mismatch");
    const Operator mix(rho.dims(), 0.5 * (rho.matrix() + sigma.matrix()));
    const Operator a = star_1chain_op(StarKind::LS, e, mix);
    const Operator b = star_1chain_op(StarKind::LS, e, rho);
    const Operator c = star_1chain_op(StarKind::LS, e, sigma);
    return (a.matrix() - 0.5 * b.matrix() - 0.5 * c.matrix()).cwiseAbs().maxCoeff();
}

}  // namespace qsot
