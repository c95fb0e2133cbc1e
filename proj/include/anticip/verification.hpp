#pragma once

// Numbered acceptance checks plus a few extra identity checks, each run at a
// fixed seed and reported as one pass/fail record.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace anticip {

struct CriterionResult {
  std::string id;  // "1".."12" for acceptance criteria
  std::string name;
  bool passed = false;
  std::string measured;
  std::string expected;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 42;
  unsigned threads = 0;
};

enum class Suite { kAll, kIdentities, kStatistics, kBounds };

// "all" | "identities" | "statistics" | "bounds"
Suite parse_suite(std::string_view name);

inline constexpr int kCriterionCount = 12;

// Throws std::invalid_argument for ids outside 1..12.
CriterionResult run_criterion(int id, const VerifyOptions& options);

// Extra identity checks outside the numbered list: "parseval", "symmetry".
CriterionResult run_identity_check(std::string_view name, const VerifyOptions& options);

std::vector<std::string> suite_members(Suite suite);
std::vector<CriterionResult> run_suite(Suite suite, const VerifyOptions& options);

}  // namespace anticip
