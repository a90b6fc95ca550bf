// qsot: construct quantum states over time from channel chains, extract
// quasiprobability distributions and multi-time expectation values, and run
// the randomized verification suite.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qsot/channels.hpp"
#include "qsot/quasiprob.hpp"
#include "qsot/scenarios.hpp"
#include "qsot/serialize.hpp"
#include "qsot/snapshot.hpp"
#include "qsot/star.hpp"
#include "qsot/verify.hpp"
#include "qsot/version.hpp"

namespace {

using namespace qsot;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitSuiteFailure = 3;

struct CommonFlags {
    std::string kind = "fp";
    std::string policy = "markovian";
    uint64_t seed = 42;
    int trials = 50;
    double tol = kTolStructural;
    std::string out;
    std::string format = "json";
};

void emit(const CommonFlags& flags, const std::string& text) {
    if (flags.out.empty())
        std::cout << text;
    else
        write_text_file(flags.out, text);
}

Json report_header(const CommonFlags& flags) {
    return Json{{"version", kToolVersion}, {"seed", flags.seed},     {"tol", flags.tol},
                {"kind", flags.kind},      {"policy", flags.policy}};
}

ExtensionPolicy parse_policy(const std::string& text) {
    if (text == "markovian") return ExtensionPolicy::make_markovian();
    if (text.rfind("holistic:", 0) == 0)
        return ExtensionPolicy::make_holistic(text.substr(9));
    throw ValidationError("policy must be 'markovian' or 'holistic:<bits over L,R>'");
}

Operator load_state(const std::string& path, double tol) {
    const Operator rho = operator_from_json(read_json_file(path));
    if (!rho.is_hermitian(tol)) throw ValidationError("state is not Hermitian");
    if (std::abs(rho.trace() - Complex(1.0)) > tol)
        throw ValidationError("state does not have unit trace");
    if (!rho.is_psd(kTolEig)) throw ValidationError("state is not positive semidefinite");
    return rho;
}

ChannelChain load_chain(const std::string& path, double tol) {
    const ChannelChain chain = chain_from_json(read_json_file(path));
    for (size_t k = 0; k < chain.channels.size(); ++k) {
        const CptpReport rep = is_cptp(chain.channels[k], tol);
        if (!rep.ok)
            throw ValidationError("channel " + std::to_string(k) + " is not CPTP (tp_defect " +
                                  std::to_string(rep.tp_defect) + ", min Choi eig " +
                                  std::to_string(rep.min_choi_eig) + ")");
    }
    return chain;
}

QsotOperator build_qsot(const CommonFlags& flags, const ChannelChain& chain,
                        const Operator& rho) {
    const StarKind kind = star_kind_from_name(flags.kind);
    const ExtensionPolicy policy = parse_policy(flags.policy);
    if (!policy.markovian) {
        if (kind != StarKind::FP)
            throw ValidationError("holistic policies are defined for the fp kind only");
        return star_nchain_holistic(policy.bits, chain, rho);
    }
    if (kind == StarKind::LS) {
        if (chain.size() > 1) throw ValidationError("LS has no multipartite extension");
        return star_1chain(kind, chain.channels.front(), rho);
    }
    return star_nchain(kind, chain, rho);
}

Json qsot_report(const QsotOperator& q, const ChannelChain& chain, const Operator& rho,
                 double tol) {
    Json rep;
    const Complex tr = q.op.trace();
    rep["trace"] = Json{{"re", tr.real()}, {"im", tr.imag()}};
    rep["hermitian_defect"] = q.op.hermitian_defect();
    if (q.op.is_hermitian(tol))
        rep["min_eigenvalue"] = hermitian_spectrum(q.op, tol).back();
    else
        rep["min_eigenvalue"] = nullptr;
    rep["marginal_defect"] = marginal_check(q, chain, rho, tol).max_defect;
    return rep;
}

int cmd_qsot(const CommonFlags& flags, const std::string& chain_path,
             const std::string& rho_path, const std::string& job_path) {
    CommonFlags f = flags;
    ChannelChain chain({identity_channel(2)});
    std::optional<Operator> rho;
    if (!job_path.empty()) {
        const Json job = read_json_file(job_path);
        if (job.contains("kind")) f.kind = job["kind"].get<std::string>();
        if (job.contains("policy")) {
            const Json& p = job["policy"];
            if (p.contains("markovian") && p["markovian"].get<bool>())
                f.policy = "markovian";
            else if (p.contains("holistic"))
                f.policy = "holistic:" + p["holistic"].get<std::string>();
            else
                throw ValidationError("job policy must be {\"markovian\":true} or {\"holistic\":\"...\"}");
        }
        chain = chain_from_json(job.at("chain"));
        for (const auto& c : chain.channels)
            if (!is_cptp(c, f.tol).ok) throw ValidationError("job chain contains a non-CPTP channel");
        rho = operator_from_json(job.at("rho"));
    } else {
        chain = load_chain(chain_path, f.tol);
        rho = load_state(rho_path, f.tol);
    }

    const QsotOperator q = build_qsot(f, chain, *rho);
    Json out = report_header(f);
    out["kind"] = star_kind_name(q.kind);
    out["policy"] = q.policy.to_string();
    out["qsot"] = to_json(q.op);
    out["report"] = qsot_report(q, chain, *rho, f.tol);
    emit(f, dump_json(out));
    return kExitOk;
}

int cmd_quasiprob(const CommonFlags& flags, const std::string& chain_path,
                  const std::string& rho_path, const std::string& povm_path) {
    const ChannelChain chain = load_chain(chain_path, flags.tol);
    const Operator rho = load_state(rho_path, flags.tol);
    const std::vector<Povm> povms = povm_list_from_json(read_json_file(povm_path));
    for (const auto& p : povms) p.validate(flags.tol);

    const QsotOperator q = build_qsot(flags, chain, rho);
    const QuasiDistribution qd = from_qsot(q, povms);

    if (flags.format == "csv") {
        emit(flags, quasidist_csv(qd));
        return kExitOk;
    }
    Json out = report_header(flags);
    out["distribution"] = to_json(qd);
    const NegativityReport neg = negativity_report(qd);
    out["negativity"] = Json{{"sum_abs_minus_one", neg.sum_abs_minus_one},
                             {"min_real", neg.min_real}};
    const Complex total = qd.total();
    out["total"] = Json{{"re", total.real()}, {"im", total.imag()}};
    if (qd.axes.size() >= 3) {
        const MarkovReport mk = markov_check(qd, flags.tol);
        out["markov"] = Json{{"is_markov", mk.is_markov},
                             {"max_defect", mk.max_defect},
                             {"witness", mk.witness},
                             {"skipped_undefined", mk.skipped_undefined}};
    } else {
        out["markov"] = nullptr;
    }
    emit(flags, dump_json(out));
    return kExitOk;
}

int cmd_snapshot(const CommonFlags& flags, const std::string& chain_path,
                 const std::string& rho_path, const std::string& obs_path,
                 const std::string& mode) {
    const ChannelChain chain = load_chain(chain_path, flags.tol);
    const Operator rho = load_state(rho_path, flags.tol);
    const Json oj = read_json_file(obs_path);
    ObservableChain obs;
    for (const auto& o : oj.at("observables")) obs.observables.push_back(operator_from_json(o));

    const StarKind kind = star_kind_from_name(flags.kind);
    Json out = report_header(flags);
    std::optional<Complex> direct, factored;
    if (mode != "factored") direct = expectation_direct(kind, chain, rho, obs);
    if (mode != "direct") factored = expectation_factored(kind, chain, rho, obs);
    if (direct) out["direct"] = Json{{"re", direct->real()}, {"im", direct->imag()}};
    if (factored) out["factored"] = Json{{"re", factored->real()}, {"im", factored->imag()}};
    if (direct && factored) out["defect"] = std::abs(*direct - *factored);
    emit(flags, dump_json(out));
    return kExitOk;
}

Json pair_table_json(const PairTable& t) {
    return Json{{"pp", t.p[0][0]}, {"pm", t.p[0][1]}, {"mp", t.p[1][0]}, {"mm", t.p[1][1]}};
}

int cmd_lg(const CommonFlags& flags, const std::string& rho_path,
           const std::string& vectors_path) {
    Matrix zero(2, 2);
    zero << 1, 0, 0, 0;
    Operator rho(SystemDims{2}, zero);
    if (!rho_path.empty()) rho = load_state(rho_path, flags.tol);

    std::array<Bloch, 3> vectors = default_bloch_vectors();
    if (!vectors_path.empty()) {
        const Json vj = read_json_file(vectors_path);
        const auto& arr = vj.at("vectors");
        if (!arr.is_array() || arr.size() != 3)
            throw ParseError("vectors file must contain \"vectors\": [[x,y,z] x3]");
        for (size_t k = 0; k < 3; ++k)
            for (size_t c = 0; c < 3; ++c) vectors[k][c] = arr[k][c].get<double>();
    }

    const LeggettGargConfig config(vectors, rho);
    const LgReport rep = lg_run(config);

    Json out = report_header(flags);
    out["kind"] = "fp";
    out["policy"] = "markovian";
    out["c12"] = rep.c12;
    out["c23"] = rep.c23;
    out["c13"] = rep.c13;
    out["lg_sum"] = rep.lg_sum;
    out["violated"] = rep.violated;
    const std::array<std::string, 3> names{"pair_12", "pair_23", "pair_13"};
    for (size_t k = 0; k < 3; ++k)
        out[names[k]] = Json{{"collapse", pair_table_json(rep.collapse_tables[k])},
                             {"qsot", pair_table_json(rep.qsot_tables[k])}};
    out["route_defect"] = rep.route_defect;
    out["table_defect"] = rep.table_defect;
    emit(flags, dump_json(out));
    std::cerr << "lg_sum = " << rep.lg_sum << (rep.violated ? " (violated)" : "") << "\n";
    return kExitOk;
}

int cmd_nonmarkov(const CommonFlags& flags) {
    const NonMarkovReport rep = nonmarkov_demo();
    if (flags.format == "csv") {
        std::string text;
        text += "# tripartite distribution (bases Z, X, Z)\n";
        text += quasidist_csv(rep.distribution);
        text += "\n# conditional Q(x2 | x0, x1)\n";
        text += conditional_csv(rep.cond_full);
        text += "\n# conditional Q(x2 | x1)\n";
        text += conditional_csv(rep.cond_pair);
        emit(flags, text);
        return kExitOk;
    }
    Json out = report_header(flags);
    out["kind"] = "fp";
    out["policy"] = "markovian";
    out["distribution"] = to_json(rep.distribution);
    out["cond_formula_defect"] = rep.cond_formula_defect;
    out["delta_defect"] = rep.delta_defect;
    out["pair_value_defect"] = rep.pair_value_defect;
    out["markov"] = Json{{"is_markov", rep.markov.is_markov},
                         {"max_defect", rep.markov.max_defect},
                         {"witness", rep.markov.witness}};
    emit(flags, dump_json(out));
    return kExitOk;
}

int cmd_spectrum(const CommonFlags& flags, const std::string& in_path) {
    const Operator op = operator_from_json(read_json_file(in_path));
    Json out = report_header(flags);
    out["dims"] = op.dims().dims;
    out["hermitian_defect"] = op.hermitian_defect();
    const Complex tr = op.trace();
    out["trace"] = Json{{"re", tr.real()}, {"im", tr.imag()}};
    out["spectrum"] = hermitian_spectrum(op, flags.tol);
    emit(flags, dump_json(out));
    return kExitOk;
}

int cmd_verify(const CommonFlags& flags, const std::string& sabotage, bool tol_given) {
    VerifyOptions options;
    options.seed = flags.seed;
    options.trials = flags.trials;
    options.sabotage = sabotage;
    if (tol_given) options.tol_override = flags.tol;
    if (options.trials == 0)
        std::cerr << "warning: trials=0, every invariant passes vacuously\n";

    const std::vector<InvariantResult> results = run_verification(options);
    Json lines = Json::array();
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "  value=" << r.value
                  << "  threshold " << (r.compare == "le" ? "<= " : ">= ") << r.threshold
                  << "\n";
        lines.push_back(Json{{"name", r.name},
                             {"value", r.value},
                             {"threshold", r.threshold},
                             {"compare", r.compare},
                             {"pass", r.pass}});
    }
    const bool ok = all_pass(results);
    if (!flags.out.empty()) {
        Json out = report_header(flags);
        out["trials"] = flags.trials;
        out["invariants"] = std::move(lines);
        out["all_pass"] = ok;
        write_text_file(flags.out, dump_json(out));
    }
    if (!ok) {
        for (const auto& r : results)
            if (!r.pass) std::cerr << "failing invariant: " << r.name << "\n";
        return kExitSuiteFailure;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum states over time: construction, quasiprobabilities, snapshots"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string chain_path, rho_path, povm_path, obs_path, job_path, vectors_path, in_path;
    std::string mode = "both", sabotage;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--kind", flags.kind, "star product kind: fp|left|right|ls");
        sub->add_option("--policy", flags.policy, "markovian or holistic:<bits over L,R>");
        sub->add_option("--seed", flags.seed, "PRNG seed");
        sub->add_option("--trials", flags.trials, "randomized trial count");
        sub->add_option("--out", flags.out, "output path (default stdout)");
        sub->add_option("--format", flags.format, "json|csv")
            ->check(CLI::IsMember({"json", "csv"}));
        return sub->add_option("--tol", flags.tol, "tolerance for validation checks");
    };

    CLI::App* qsot_cmd = app.add_subcommand("qsot", "construct a QSOT from a chain and a state");
    add_common(qsot_cmd);
    qsot_cmd->add_option("--chain", chain_path, "chain JSON path");
    qsot_cmd->add_option("--rho", rho_path, "initial state JSON path");
    qsot_cmd->add_option("--job", job_path, "single-document job JSON {kind,policy,chain,rho}");

    CLI::App* quasi_cmd =
        app.add_subcommand("quasiprob", "quasiprobability distribution of a QSOT and POVMs");
    add_common(quasi_cmd);
    quasi_cmd->add_option("--chain", chain_path, "chain JSON path")->required();
    quasi_cmd->add_option("--rho", rho_path, "initial state JSON path")->required();
    quasi_cmd->add_option("--povms", povm_path, "POVM list JSON path")->required();

    CLI::App* snap_cmd =
        app.add_subcommand("snapshot", "multi-time expectation values, direct and factored");
    add_common(snap_cmd);
    snap_cmd->add_option("--chain", chain_path, "chain JSON path")->required();
    snap_cmd->add_option("--rho", rho_path, "initial state JSON path")->required();
    snap_cmd->add_option("--obs", obs_path, "observable chain JSON path")->required();
    snap_cmd->add_flag_callback("--direct", [&] { mode = "direct"; });
    snap_cmd->add_flag_callback("--factored", [&] { mode = "factored"; });
    snap_cmd->add_flag_callback("--both", [&] { mode = "both"; });

    CLI::App* lg_cmd = app.add_subcommand("lg", "three-time Leggett-Garg scenario report");
    add_common(lg_cmd);
    lg_cmd->add_option("--rho", rho_path, "qubit state JSON path (default |0><0|)");
    lg_cmd->add_option("--vectors", vectors_path, "Bloch vectors JSON path");

    CLI::App* nm_cmd =
        app.add_subcommand("nonmarkov-demo", "non-Markovian quasiprobability demonstration");
    add_common(nm_cmd);

    CLI::App* spec_cmd = app.add_subcommand("spectrum", "eigenvalues of a Hermitian operator");
    add_common(spec_cmd);
    spec_cmd->add_option("--in", in_path, "operator JSON path")->required();

    CLI::App* verify_cmd = app.add_subcommand("verify", "run the randomized invariant suite");
    CLI::Option* tol_opt = add_common(verify_cmd);
    verify_cmd->add_option("--sabotage", sabotage, "inject a fault (target: marginal)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*qsot_cmd) {
            if (job_path.empty() && (chain_path.empty() || rho_path.empty()))
                throw ValidationError("qsot requires --chain and --rho (or --job)");
            return cmd_qsot(flags, chain_path, rho_path, job_path);
        }
        if (*quasi_cmd) return cmd_quasiprob(flags, chain_path, rho_path, povm_path);
        if (*snap_cmd) return cmd_snapshot(flags, chain_path, rho_path, obs_path, mode);
        if (*lg_cmd) return cmd_lg(flags, rho_path, vectors_path);
        if (*nm_cmd) return cmd_nonmarkov(flags);
        if (*spec_cmd) return cmd_spectrum(flags, in_path);
        if (*verify_cmd) return cmd_verify(flags, sabotage, tol_opt->count() > 0);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitIo;
}
