#pragma once

#include <string>
#include <vector>

#include "skewprod/config.hpp"
#include "skewprod/suites.hpp"

namespace skewprod {

// Canonical JSON report. Deterministic by construction: fixed key order, no
// timestamps, non-finite numbers serialized as null, so identical runs give
// byte-identical output regardless of thread count.
std::string report_json_string(const RunSpec& spec,
                               const std::vector<SuiteResult>& results);

// One row per test: suite,name,statistic,null_scale,z_score,p_value,verdict,
// expected,tolerance.
std::string report_csv_string(const std::vector<SuiteResult>& results);

std::string summary_text(const std::vector<SuiteResult>& results);

// Writes report.json / report.csv (per spec.format_*) and summary.txt under
// spec.out_dir, creating it if needed. Returns the paths written.
std::vector<std::string> write_reports(const RunSpec& spec,
                                       const std::vector<SuiteResult>& results);

// Re-simulates the suite's primary ensemble with its original keys and writes
// one trace per path under out_dir/paths/<suite>/. Columns are time then the
// state entries in row-major order.
void dump_suite_paths(const RunSpec& spec, const std::string& suite);

}  // namespace skewprod
