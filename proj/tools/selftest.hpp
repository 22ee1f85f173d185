// The invariant suite behind `ptexp selftest`.

#ifndef PTEXP_TOOLS_SELFTEST_HPP
#define PTEXP_TOOLS_SELFTEST_HPP

#include <string>
#include <vector>

namespace ptexp::cli {

struct Check {
    std::string suite;
    std::string name;
    double value = 0.0;      ///< measured deviation
    double tolerance = 0.0;  ///< after scaling
    bool passed = false;
};

struct SuiteCount {
    std::string suite;
    int passed = 0, total = 0;
};

struct SelftestReport {
    std::vector<Check> checks;
    std::vector<SuiteCount> suites;
    double seconds = 0.0;
    bool passed() const;
};

/// Every tolerance is multiplied by tolerance_scale; a tiny scale makes the
/// suite fail, which is how the failure path is exercised.
SelftestReport run_selftest(double tolerance_scale = 1.0, unsigned threads = 1);

std::vector<std::string> suite_names();

}  // namespace ptexp::cli

#endif
