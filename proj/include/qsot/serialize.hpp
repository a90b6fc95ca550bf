#ifndef QSOT_SERIALIZE_HPP
#define QSOT_SERIALIZE_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "qsot/channels.hpp"
#include "qsot/linalg.hpp"
#include "qsot/quasiprob.hpp"
#include "qsot/scenarios.hpp"

namespace qsot {

using Json = nlohmann::json;

/// Thrown on malformed input documents. The CLI maps this to exit code 1.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Operators: {"dims":[...], "re":[[...]], "im":[[...]]}, row-major.
Json to_json(const Operator& op);
Operator operator_from_json(const Json& j);

// Matrices without dims metadata: {"re":[[...]], "im":[[...]]}.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

// Channels: {"in_dim":..., "out_dim":..., "kraus":[{re,im},...]}.
Json to_json(const QuantumChannel& e);
QuantumChannel channel_from_json(const Json& j);

// Chains: {"channels":[...]}.
Json to_json(const ChannelChain& chain);
ChannelChain chain_from_json(const Json& j);

// POVMs: {"dim":..., "elements":[{re,im},...]}; lists: {"povms":[...]}.
Json to_json(const Povm& p);
Povm povm_from_json(const Json& j);
std::vector<Povm> povm_list_from_json(const Json& j);

// Distributions: {"axes":[...], "re":[...], "im":[...]}, flat row-major.
Json to_json(const QuasiDistribution& qd);
QuasiDistribution quasidist_from_json(const Json& j);

/// One row per outcome tuple: indices, Re(Q), Im(Q).
std::string quasidist_csv(const QuasiDistribution& qd);
std::string conditional_csv(const ConditionalTable& table);

/// Deterministic dump: sorted keys (nlohmann default) and every float
/// rendered with 17 significant digits, so identical inputs yield
/// byte-identical reports. Ends with a newline.
std::string dump_json(const Json& j);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace qsot

#endif
