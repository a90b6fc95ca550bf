#include "qsot/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qsot {

namespace {

Json real_part_rows(const Matrix& m, bool imag) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(imag ? m(i, j).imag() : m(i, j).real());
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_parts(const Json& re, const Json& im) {
    if (!re.is_array() || re.empty() || !re[0].is_array())
        throw ParseError("matrix: 're' must be a 2-D array");
    const auto rows = re.size();
    const auto cols = re[0].size();
    const bool has_im = !im.is_null();
    if (has_im && (!im.is_array() || im.size() != rows))
        throw ParseError("matrix: 'im' shape does not match 're'");
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (size_t i = 0; i < rows; ++i) {
        if (re[i].size() != cols || (has_im && im[i].size() != cols))
            throw ParseError("matrix: ragged rows");
        for (size_t j = 0; j < cols; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                Complex(re[i][j].get<double>(), has_im ? im[i][j].get<double>() : 0.0);
    }
    return m;
}

const Json& require(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing key '") + key + "'");
    return *it;
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
    return Json{{"re", real_part_rows(m, false)}, {"im", real_part_rows(m, true)}};
}

Matrix matrix_from_json(const Json& j) {
    return matrix_from_parts(require(j, "re"), j.value("im", Json()));
}

Json to_json(const Operator& op) {
    Json j = matrix_to_json(op.matrix());
    j["dims"] = op.dims().dims;
    return j;
}

Operator operator_from_json(const Json& j) {
    Matrix m = matrix_from_json(j);
    std::vector<int> dims;
    if (j.contains("dims"))
        dims = j["dims"].get<std::vector<int>>();
    else
        dims = {static_cast<int>(m.rows())};
    try {
        return Operator(SystemDims(std::move(dims)), std::move(m));
    } catch (const ValidationError& e) {
        throw ParseError(std::string("operator: ") + e.what());
    }
}

Json to_json(const QuantumChannel& e) {
    Json kraus = Json::array();
    for (const auto& k : e.kraus) kraus.push_back(matrix_to_json(k));
    return Json{{"in_dim", e.in_dim}, {"out_dim", e.out_dim}, {"kraus", std::move(kraus)}};
}

QuantumChannel channel_from_json(const Json& j) {
    const int in = require(j, "in_dim").get<int>();
    const int out = require(j, "out_dim").get<int>();
    std::vector<Matrix> kraus;
    for (const auto& k : require(j, "kraus")) kraus.push_back(matrix_from_json(k));
    try {
        return QuantumChannel(in, out, std::move(kraus));
    } catch (const ValidationError& e) {
        throw ParseError(std::string("channel: ") + e.what());
    }
}

Json to_json(const ChannelChain& chain) {
    Json channels = Json::array();
    for (const auto& c : chain.channels) channels.push_back(to_json(c));
    return Json{{"channels", std::move(channels)}};
}

ChannelChain chain_from_json(const Json& j) {
    std::vector<QuantumChannel> channels;
    for (const auto& c : require(j, "channels")) channels.push_back(channel_from_json(c));
    try {
        return ChannelChain(std::move(channels));
    } catch (const ValidationError& e) {
        throw ParseError(std::string("chain: ") + e.what());
    }
}

Json to_json(const Povm& p) {
    Json els = Json::array();
    for (const auto& m : p.elements) els.push_back(matrix_to_json(m));
    return Json{{"dim", p.dim}, {"elements", std::move(els)}};
}

Povm povm_from_json(const Json& j) {
    const int dim = require(j, "dim").get<int>();
    std::vector<Matrix> els;
    for (const auto& m : require(j, "elements")) els.push_back(matrix_from_json(m));
    try {
        return Povm(dim, std::move(els));
    } catch (const ValidationError& e) {
        throw ParseError(std::string("povm: ") + e.what());
    }
}

std::vector<Povm> povm_list_from_json(const Json& j) {
    std::vector<Povm> povms;
    for (const auto& p : require(j, "povms")) povms.push_back(povm_from_json(p));
    return povms;
}

Json to_json(const QuasiDistribution& qd) {
    Json re = Json::array(), im = Json::array();
    for (const Complex& v : qd.values) {
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    return Json{{"axes", qd.axes}, {"re", std::move(re)}, {"im", std::move(im)}};
}

QuasiDistribution quasidist_from_json(const Json& j) {
    QuasiDistribution qd;
    qd.axes = require(j, "axes").get<std::vector<int>>();
    const Json& re = require(j, "re");
    const Json& im = require(j, "im");
    if (re.size() != im.size()) throw ParseError("distribution: re/im length mismatch");
    for (size_t k = 0; k < re.size(); ++k)
        qd.values.emplace_back(re[k].get<double>(), im[k].get<double>());
    if (static_cast<int>(qd.values.size()) != qd.tuple_count())
        throw ParseError("distribution: value count does not match axes");
    return qd;
}

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

std::string quasidist_csv(const QuasiDistribution& qd) {
    std::ostringstream os;
    for (size_t k = 0; k < qd.axes.size(); ++k) os << "x" << k << ",";
    os << "re,im\n";
    for (int flat = 0; flat < qd.tuple_count(); ++flat) {
        for (int idx : qd.unflatten(flat)) os << idx << ",";
        const Complex v = qd.values[static_cast<size_t>(flat)];
        os << fmt17(v.real()) << "," << fmt17(v.imag()) << "\n";
    }
    return os.str();
}

std::string conditional_csv(const ConditionalTable& table) {
    std::ostringstream os;
    for (int g : table.given_axes) os << "given_x" << g << ",";
    os << "x" << table.target_axis << ",re,im,defined\n";
    int count = 1;
    for (int a : table.axes) count *= a;
    std::vector<int> tuple(table.axes.size());
    for (int flat = 0; flat < count; ++flat) {
        int rem = flat;
        for (size_t k = table.axes.size(); k-- > 0;) {
            tuple[k] = rem % table.axes[k];
            rem /= table.axes[k];
        }
        for (int t : tuple) os << t << ",";
        const Complex v = table.values[static_cast<size_t>(flat)];
        os << fmt17(v.real()) << "," << fmt17(v.imag()) << ","
           << (table.defined[static_cast<size_t>(flat)] ? 1 : 0) << "\n";
    }
    return os.str();
}

namespace {

void dump_rec(const Json& j, std::string& out) {
    switch (j.type()) {
        case Json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += Json(it.key()).dump();
                out += ':';
                dump_rec(it.value(), out);
            }
            out += '}';
            break;
        }
        case Json::value_t::array: {
            out += '[';
            for (size_t k = 0; k < j.size(); ++k) {
                if (k) out += ',';
                dump_rec(j[k], out);
            }
            out += ']';
            break;
        }
        case Json::value_t::number_float:
            out += fmt17(j.get<double>());
            break;
        default:
            out += j.dump();
            break;
    }
}

}  // namespace

std::string dump_json(const Json& j) {
    std::string out;
    dump_rec(j, out);
    out += '\n';
    return out;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParseError("invalid JSON in '" + path + "': " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    out << contents;
    if (!out) throw ParseError("write failed for '" + path + "'");
}

}  // namespace qsot
