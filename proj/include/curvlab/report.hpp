#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "curvlab/verify.hpp"

namespace curvlab {

enum class ReportFormat { table, csv, json_lines };

/// "table", "csv", "json-lines" (also "json" and "structured").
ReportFormat parse_format(const std::string& name);

struct ReportMeta {
  std::vector<std::pair<std::string, Provenance>> instances;
  VerifyConfig cfg;
};

/// Field order is fixed. The json-lines form starts with a header object
/// carrying provenance and tolerances and leaves out runtimes, so identical
/// inputs give identical bytes.
void write_report(std::ostream& out, const std::vector<TheoremCheckResult>& results, ReportFormat format,
                  const ReportMeta& meta);
std::string render_report(const std::vector<TheoremCheckResult>& results, ReportFormat format, const ReportMeta& meta);

}  // namespace curvlab
