#pragma once

#include <string>
#include <vector>

#include "morandim/dimension.hpp"
#include "morandim/geometry.hpp"
#include "morandim/scale_function.hpp"
#include "morandim/words.hpp"

namespace morandim {

// Stable numeric formatting for all machine-readable output: shortest
// round-trip representation, C locale, byte-identical across runs.
std::string fmt_double(double v);

std::string report_text(const DimensionReport& r, const std::string& source);
std::string theta_trace_csv(const DimensionReport& r);
std::string predims_csv(const PreDimensions& p);

std::string estimator_csv(const EstimatorResult& r);

std::string intervals_csv(const IntervalSet& s);
IntervalSet parse_intervals_csv(const std::string& text);

std::string scale_csv(const ScaleFunction& h);
ScaleFunction parse_scale_csv(const std::string& text);
std::string psi_table_csv(const ScaleEstimate& e);

std::string cutset_csv(const Cutset& c);
std::string classes_csv(const DyadicClasses& c);
std::string overlap_csv(const OverlapResult& r);

}  // namespace morandim
