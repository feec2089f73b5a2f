#pragma once

#include <iosfwd>

#include <json.hpp>

#include "explab/monotonicity.hpp"
#include "explab/varifold.hpp"

namespace explab {

/// Note carried in every report header: which annulus weighting the verifier
/// integrates (the alternative unweighted form fails the offset-line
/// equality oracle).
extern const char* const kWeightingNote;

nlohmann::json report_to_json(const VerificationReport& report);
nlohmann::json cone_report_to_json(const ConeReport& report);
nlohmann::json blow_down_to_json(const BlowDownResult& result);

/// One row per annulus: R1,R2,lhs,term1,term2,term3,slack.
void write_report_csv(const VerificationReport& report, std::ostream& os);

}  // namespace explab
