#include "explab/report_io.hpp"

#include <cstdio>
#include <ostream>

namespace explab {

const char* const kWeightingNote =
    "annulus term uses the transverse weight f*|xperp|^2/|x-p0|^(n+2); the "
    "unweighted d/dR form of the same integrand does not achieve equality on "
    "the offset-line oracle";

nlohmann::json report_to_json(const VerificationReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const AnnulusRow& r : report.rows) {
    rows.push_back({{"r1", r.r1},
                    {"r2", r.r2},
                    {"lhs", r.lhs},
                    {"term1", r.term1},
                    {"term2", r.term2},
                    {"term3", r.term3},
                    {"slack", r.slack}});
  }
  nlohmann::json hyp = {{"defect_min", report.hypothesis.defect_min},
                        {"defect_tol", report.hypothesis.defect_tol},
                        {"defect_ok", report.hypothesis.defect_ok},
                        {"met", report.hypothesis.ok()}};
  if (report.hypothesis.laplace_margin_min) {
    hyp["laplace_margin_min"] = *report.hypothesis.laplace_margin_min;
  }
  nlohmann::json j = {
      {"claim", report.claim},
      {"grid", report.grid},
      {"rows", rows},
      {"hypothesis", hyp},
      {"worst_slack", report.worst_slack},
      {"verdict", to_string(report.verdict)},
      {"tolerances", {{"tol_slack", report.tol_slack},
                      {"tol_eq", report.tol_eq}}},
      {"dropped_segments", report.dropped.segments},
      {"dropped_length", report.dropped.length},
      {"weighting_note", kWeightingNote},
  };
  if (!report.g.empty()) j["g"] = report.g;
  return j;
}

nlohmann::json cone_report_to_json(const ConeReport& report) {
  return {{"s", report.s},
          {"t", report.t},
          {"ratio_s", report.ratio_s},
          {"ratio_t", report.ratio_t},
          {"slack", report.slack},
          {"deviation", report.deviation},
          {"is_cone", report.is_cone},
          {"hypothesis_warning", report.hypothesis_warning},
          {"rays", report.rays}};
}

nlohmann::json blow_down_to_json(const BlowDownResult& result) {
  nlohmann::json reports = nlohmann::json::array();
  for (const ConeReport& r : result.reports) {
    reports.push_back(cone_report_to_json(r));
  }
  return {{"scales", result.scales},
          {"reports", reports},
          {"limit_rays", result.limit_rays},
          {"weighting_note", kWeightingNote}};
}

void write_report_csv(const VerificationReport& report, std::ostream& os) {
  os << "R1,R2,lhs,term1,term2,term3,slack\n";
  char buf[512];
  for (const AnnulusRow& r : report.rows) {
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.r1, r.r2,
                  r.lhs, r.term1, r.term2, r.term3, r.slack);
    os << buf;
  }
}

}  // namespace explab
