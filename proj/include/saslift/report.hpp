#pragma once
// Verification reports: named residual entries with tolerances and pass
// flags, a summary, and free-form findings (fitted constants, candidate
// comparisons, anomalies).  Serialization is deliberately hand-rolled so the
// field order is stable and numbers are printed with 17 significant digits;
// two runs with the same scenario and seed produce byte-identical documents
// once the timestamp line is stripped.

#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace saslift {

struct ReportEntry {
  std::string label;
  std::string anchor;  // the identity being checked, or "plumbing"
  int samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Finding {
  std::string title;
  std::string text;
  std::vector<std::pair<std::string, double>> values;
};

struct VerificationReport {
  std::string schema_version = "1";
  std::string scenario;  // manifold and parameter summary
  std::uint64_t seed = 0;
  std::string timestamp;  // informational; stripped for comparisons
  std::vector<ReportEntry> entries;
  std::vector<Finding> findings;

  int total() const { return static_cast<int>(entries.size()); }
  int passed() const {
    int n = 0;
    for (const auto& e : entries) n += e.pass ? 1 : 0;
    return n;
  }
  int failed() const { return total() - passed(); }
  bool all_pass() const { return failed() == 0; }
};

namespace detail {

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

enum class ReportFormat { kJson, kText };

inline std::string emit_report(const VerificationReport& r, ReportFormat format) {
  std::ostringstream os;
  if (format == ReportFormat::kJson) {
    os << "{\n";
    os << "  \"schema_version\": \"" << detail::json_escape(r.schema_version) << "\",\n";
    os << "  \"scenario\": \"" << detail::json_escape(r.scenario) << "\",\n";
    os << "  \"seed\": " << r.seed << ",\n";
    os << "  \"timestamp\": \"" << detail::json_escape(r.timestamp) << "\",\n";
    os << "  \"entries\": [\n";
    for (size_t i = 0; i < r.entries.size(); ++i) {
      const ReportEntry& e = r.entries[i];
      os << "    {\"label\": \"" << detail::json_escape(e.label) << "\", \"anchor\": \""
         << detail::json_escape(e.anchor) << "\", \"samples\": " << e.samples
         << ", \"max_residual\": " << detail::fmt17(e.max_residual)
         << ", \"tolerance\": " << detail::fmt17(e.tolerance)
         << ", \"pass\": " << (e.pass ? "true" : "false") << "}";
      os << (i + 1 < r.entries.size() ? ",\n" : "\n");
    }
    os << "  ],\n";
    os << "  \"findings\": [\n";
    for (size_t i = 0; i < r.findings.size(); ++i) {
      const Finding& f = r.findings[i];
      os << "    {\"title\": \"" << detail::json_escape(f.title) << "\", \"text\": \""
         << detail::json_escape(f.text) << "\", \"values\": {";
      for (size_t j = 0; j < f.values.size(); ++j) {
        os << "\"" << detail::json_escape(f.values[j].first)
           << "\": " << detail::fmt17(f.values[j].second);
        if (j + 1 < f.values.size()) os << ", ";
      }
      os << "}}" << (i + 1 < r.findings.size() ? ",\n" : "\n");
    }
    os << "  ],\n";
    os << "  \"summary\": {\"total\": " << r.total() << ", \"passed\": " << r.passed()
       << ", \"failed\": " << r.failed() << "}\n";
    os << "}\n";
    return os.str();
  }

  os << "verification report (schema " << r.schema_version << ")\n";
  os << "scenario: " << r.scenario << "\n";
  os << "seed: " << r.seed << "\n";
  os << "timestamp: " << r.timestamp << "\n";
  os << "\n";
  for (const ReportEntry& e : r.entries) {
    os << (e.pass ? "PASS" : "FAIL") << "  " << e.label << "  [" << e.anchor << "]"
       << "  samples=" << e.samples << "  max_residual=" << detail::fmt17(e.max_residual)
       << "  tol=" << detail::fmt17(e.tolerance) << "\n";
  }
  if (!r.findings.empty()) {
    os << "\nfindings:\n";
    for (const Finding& f : r.findings) {
      os << "- " << f.title << ": " << f.text << "\n";
      for (const auto& [k, v] : f.values) os << "    " << k << " = " << detail::fmt17(v) << "\n";
    }
  }
  os << "\nsummary: total=" << r.total() << " passed=" << r.passed() << " failed=" << r.failed()
     << "\n";
  return os.str();
}

}  // namespace saslift
