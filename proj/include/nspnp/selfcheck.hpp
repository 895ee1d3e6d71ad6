#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nspnp {

struct CheckResult {
  std::string name;
  bool passed = false;
  /// Worst observed value against its tolerance, human readable.
  std::string detail;
};

struct SelfCheckReport {
  std::vector<CheckResult> checks;
  int passed() const;
  int failed() const;
};

/// Fast property checks on small problems: quadrature exactness, operator
/// symmetry and kernels, solver agreement with dense elimination, MMS sources
/// against finite differences, splitting linearity, run determinism.
SelfCheckReport run_selfcheck(std::uint64_t seed);

}  // namespace nspnp
