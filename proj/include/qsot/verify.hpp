#ifndef QSOT_VERIFY_HPP
#define QSOT_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace qsot {

/// One randomized-invariant outcome. `compare` is "le" for defects that must
/// stay below `threshold`, "ge" for gaps that must exceed it.
struct InvariantResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    std::string compare = "le";
    bool pass = false;
};

struct VerifyOptions {
    uint64_t seed = 42;
    int trials = 50;
    double tol_override = 0.0;  // > 0 replaces every upper-bound threshold
    std::string sabotage;       // "" or "marginal" (harness self-test)
};

/// Runs the full randomized invariant suite; deterministic in the seed.
/// trials = 0 yields a vacuous pass (every invariant reports value 0).
std::vector<InvariantResult> run_verification(const VerifyOptions& options);

bool all_pass(const std::vector<InvariantResult>& results);

}  // namespace qsot

#endif
