#pragma once

// JSON forms of psi specs, traces and audit reports, plus the text table and
// the CSV report. Integers and rationals are always written as strings.

#include <json.hpp>
#include <string>

#include "dioph/construction.hpp"
#include "dioph/verify.hpp"

namespace dioph {

using Json = nlohmann::ordered_json;

Json to_json(const PsiSpec& spec);
PsiSpec psi_spec_from_json(const Json& j);

Json to_json(const QuadReal& x);
QuadReal quad_from_json(const Json& j);

Json to_json(const ConstructionTrace& trace);
ConstructionTrace trace_from_json(const Json& j);

/// Canonical text of a trace: two-space indented JSON with a trailing newline.
std::string dump_trace(const ConstructionTrace& trace);
ConstructionTrace parse_trace(const std::string& text);

Json to_json(const AuditReport& report);

/// One row per step: k, |m_k|^2, det ratio, condition flags, theorem margins.
std::string audit_table(const AuditReport& report);

/// CSV rows k = 1..K-2 built from an audit JSON document. Throws ParseError
/// when the audit has no theorem rows.
std::string report_csv(const Json& audit);

/// Reads a whole file; throws std::runtime_error on failure.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace dioph
