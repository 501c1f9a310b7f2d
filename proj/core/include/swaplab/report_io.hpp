#pragma once

#include <string>

#include "swaplab/suites.hpp"

namespace swaplab {

void write_text_file(const std::string& path, const std::string& content);

/// One CSV line per test component: report, component, statistic, p_value, pass.
std::string summary_csv(const SuiteResult& result);

/// Writes the suite result. json: the full report to `out` (stdout when empty).
/// csv: the summary to `out`, plus `<stem>_<name>.csv` for every sample and table.
/// Returns the text written to stdout, if any.
std::string emit_suite_result(const SuiteResult& result, const std::string& out, const std::string& format);

}  // namespace swaplab
