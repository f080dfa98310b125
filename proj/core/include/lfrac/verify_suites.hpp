#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lfrac {

struct SuiteCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Suite names accepted by run_verify_suite.
std::vector<std::string> verify_suite_names();

/// Run one named property suite deterministically under the given seed.
/// Throws std::invalid_argument for an unknown suite name.
std::vector<SuiteCheck> run_verify_suite(const std::string& suite, std::uint64_t seed);

}  // namespace lfrac
