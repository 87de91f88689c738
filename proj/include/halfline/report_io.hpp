#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "halfline/asymptotics.hpp"
#include "halfline/jost_function.hpp"
#include "halfline/spectrum.hpp"
#include "halfline/trace_identities.hpp"
#include "halfline/wave_solutions.hpp"

namespace halfline {

using Json = nlohmann::ordered_json;

// Serializes with every floating-point number printed as %.17g; non-finite values become null.
std::string dump_json(const Json& j, int indent = 2);
// %.12g
std::string csv_number(double x);

Json to_json(const TraceReport& r);
Json to_json(const JostEvaluation& e);
Json to_json(const LevinsonReport& r);
Json to_json(const LevinsonCheck& c);
Json to_json(const ResonanceReport& r);
Json to_json(const BoundAudit& a);

// Oracle comparison per eigenvalue; oracle entries may be missing when the grids disagree on N.
Json eigenvalues_json(const std::string& spec, double gamma, const EigenvalueSet& e, const FdResult* oracle);
Json coefficients_json(const CoefficientLedger& led);
Json samples_json(const std::vector<WaveSample>& phi, const std::vector<WaveSample>& theta);

void write_phase_csv(std::ostream& os, const PhaseTable& t);
void write_samples_csv(std::ostream& os, const std::vector<WaveSample>& phi, const std::vector<WaveSample>& theta);
void write_trace_csv(std::ostream& os, const std::vector<TraceReport>& reports);
void write_coefficients_csv(std::ostream& os, const CoefficientLedger& led);
void write_eigenvalues_csv(std::ostream& os, const EigenvalueSet& e, const FdResult* oracle);

}  // namespace halfline
