#include "curvlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "curvlab/errors.hpp"

#ifndef CURVLAB_VERSION
#define CURVLAB_VERSION "unknown"
#endif

namespace curvlab {

using nlohmann::ordered_json;

ReportFormat parse_format(const std::string& name) {
  if (name == "table") return ReportFormat::table;
  if (name == "csv") return ReportFormat::csv;
  if (name == "json-lines" || name == "json" || name == "structured") return ReportFormat::json_lines;
  throw PreconditionError("unknown report format '" + name + "'");
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

ordered_json jnum(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_json_lines(std::ostream& out, const std::vector<TheoremCheckResult>& results, const ReportMeta& meta) {
  ordered_json head;
  head["type"] = "header";
  head["tool"] = "curvlab";
  head["version"] = CURVLAB_VERSION;
  head["seed"] = meta.cfg.seed;
  head["check_tol"] = meta.cfg.check_tol;
  head["commutation_tol"] = meta.cfg.commutation_tol;
  head["enum_cap"] = meta.cfg.enum_cap;
  head["capacity_cap"] = meta.cfg.capacity_cap;
  head["random_functions"] = meta.cfg.random_functions;
  head["optimizer"] = {{"restarts", meta.cfg.opt.restarts},
                       {"max_iters", meta.cfg.opt.max_iters},
                       {"opt_tol", meta.cfg.opt.opt_tol},
                       {"seed", meta.cfg.opt.seed},
                       {"grid", meta.cfg.opt.grid}};
  head["far_set_convention"] = "A_r = {x : d(x,A) > r}";
  ordered_json insts = ordered_json::array();
  for (const auto& [id, prov] : meta.instances) {
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : prov.params) params[k] = v;
    insts.push_back({{"id", id}, {"family", prov.family}, {"params", params}, {"seed", prov.seed}});
  }
  head["instances"] = std::move(insts);
  head["results"] = results.size();
  out << head.dump() << "\n";
  for (const auto& r : results) {
    ordered_json j;
    j["type"] = "result";
    j["theorem"] = r.theorem;
    j["instance"] = r.instance;
    j["status"] = to_string(r.status);
    j["hypothesis"] = r.hypothesis;
    j["lhs"] = jnum(r.lhs);
    j["rhs"] = jnum(r.rhs);
    j["margin"] = jnum(r.margin);
    j["detail"] = r.detail;
    out << j.dump() << "\n";
  }
}

void write_csv(std::ostream& out, const std::vector<TheoremCheckResult>& results) {
  out << "theorem,instance,status,lhs,rhs,margin,runtime,hypothesis,detail\n";
  for (const auto& r : results) {
    out << csv_field(r.theorem) << ',' << csv_field(r.instance) << ',' << to_string(r.status) << ',' << num(r.lhs)
        << ',' << num(r.rhs) << ',' << num(r.margin) << ',' << num(r.runtime) << ',' << csv_field(r.hypothesis) << ','
        << csv_field(r.detail) << "\n";
  }
}

void write_table(std::ostream& out, const std::vector<TheoremCheckResult>& results) {
  const std::vector<std::string> head = {"theorem", "instance", "status", "lhs", "rhs", "margin", "time[s]", "note"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : results) {
    char t[32];
    std::snprintf(t, sizeof t, "%.3f", r.runtime);
    const std::string note = r.status == CheckStatus::skip ? r.hypothesis : r.detail;
    rows.push_back({r.theorem, r.instance, to_string(r.status), num(r.lhs), num(r.rhs), num(r.margin), t, note});
  }
  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    width[c] = head[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out << cells[c];
      if (c + 1 < cells.size()) out << std::string(width[c] - cells[c].size() + 2, ' ');
    }
    out << "\n";
  };
  line(head);
  std::size_t total = 0;
  for (std::size_t c = 0; c + 1 < width.size(); ++c) total += width[c] + 2;
  out << std::string(total + head.back().size(), '-') << "\n";
  for (const auto& row : rows) line(row);
  const auto count = [&](CheckStatus s) {
    return std::count_if(results.begin(), results.end(), [s](const auto& r) { return r.status == s; });
  };
  out << count(CheckStatus::pass) << " passed, " << count(CheckStatus::fail) << " failed, " << count(CheckStatus::skip)
      << " skipped\n";
}

}  // namespace

void write_report(std::ostream& out, const std::vector<TheoremCheckResult>& results, ReportFormat format,
                  const ReportMeta& meta) {
  switch (format) {
    case ReportFormat::table:
      write_table(out, results);
      break;
    case ReportFormat::csv:
      write_csv(out, results);
      break;
    case ReportFormat::json_lines:
      write_json_lines(out, results, meta);
      break;
  }
  if (!out) throw PreconditionError("report sink is not writable");
}

std::string render_report(const std::vector<TheoremCheckResult>& results, ReportFormat format, const ReportMeta& meta) {
  std::ostringstream os;
  write_report(os, results, format, meta);
  return os.str();
}

}  // namespace curvlab
