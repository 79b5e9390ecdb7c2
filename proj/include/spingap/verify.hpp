#ifndef SPINGAP_VERIFY_HPP
#define SPINGAP_VERIFY_HPP

#include <string>
#include <vector>

namespace spingap {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the acceptance checks for a bundle ("pvbs", "aklt", "so" or "all").
/// Every check pins its tolerance in code; a failure carries the offending
/// numbers in `detail`.
std::vector<CheckResult> run_acceptance(const std::string& bundle);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace spingap

#endif
