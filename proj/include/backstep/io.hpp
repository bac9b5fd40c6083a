#pragma once

#include "backstep/quantitative.hpp"
#include "backstep/simulate.hpp"
#include "backstep/spectrum.hpp"
#include "backstep/transform.hpp"
#include "backstep/types.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace backstep {

using json = nlohmann::json;

// 17 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_real(double v);
// "re+imi" / "re-imi"
std::string format_complex(Complex z);
Complex parse_complex(const std::string& s);

void write_matrix_csv(std::ostream& os, const CMatrix& m);
CMatrix read_matrix_csv(std::istream& is);

json model_to_json(const SpectrumModel& model);
SpectrumModel model_from_json(const json& j);

json gap_report_to_json(const GapReport& r);
json synthesis_to_json(const BacksteppingSynthesis& syn);
json schedule_to_json(const NullControlSchedule& s);

// Deterministic text: keys sorted, two-space indent, trailing newline.
std::string dump(const json& j);

void write_sweep_csv(std::ostream& os, const SpectrumModel& model, const CostSweep& sweep);
void write_trajectory_csv(std::ostream& os, const NullControlReport& rep);

// Reads a state as a JSON array of numbers or [re, im] pairs.
StateVector state_from_json(const json& j);

}  // namespace backstep
