#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace noisy_majority {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    std::int64_t samples = 100000;  // simulated trials per oracle comparison
    unsigned threads = 0;
};

// Exact identities (drift closed form vs adoption probability and vs the
// chain's one-step mean, stubborn-model equivalence) and oracle vs
// agent-level simulation agreement.
std::vector<CheckResult> run_verify_suite(const VerifyOptions& options);

}  // namespace noisy_majority
