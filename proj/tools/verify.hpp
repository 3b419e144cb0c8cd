#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace farey::cli {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<std::string> verify_suites();

/// Runs one suite; limit overrides the suite's default size. Throws
/// std::invalid_argument for an unknown suite.
std::vector<CheckResult> run_suite(const std::string& suite, std::optional<std::int64_t> limit);

void print_checks(std::ostream& out, const std::vector<CheckResult>& checks);

}  // namespace farey::cli
