#pragma once

#include "hdq/diffusion.hpp"
#include "hdq/heavy_traffic.hpp"
#include "hdq/model.hpp"
#include "hdq/simulator.hpp"
#include "hdq/stationary.hpp"

#include <span>
#include <string>
#include <string_view>

namespace hdq::io {

/// Shortest round-trip form is not required; 17 significant digits are.
std::string format_double(double v);

/// Reads {lambda1, mu1, lambda2, mu2, ell_d, ell_u} or
/// {rho1, rho2, rho12, ell_d, ell_u}; exactly one key set, no other keys.
/// Throws hdq::Error(precondition) on malformed input.
ModelParams parse_model_config(std::string_view json_text);

/// Header ell,k,prob, one row per state and a final row tail,2,<mass>.
std::string distribution_csv(const DistributionTable& table);
std::string distribution_json(const DistributionTable& table);

/// Header x,f11,f21,f12,f22,f,F.
std::string density_csv(const LimitLaw& law, std::span<const double> grid);
std::string density_json(const LimitLaw& law, std::span<const double> grid);

std::string study_csv(const StudyTable& table);
std::string study_json(const StudyTable& table);

std::string sim_result_json(const sim::SimResult& result);
/// Header ell,k,fraction.
std::string occupancy_csv(const sim::SimResult& result, int ell_d);

/// Writes to a sibling temporary file and renames it over path.
void write_atomically(const std::string& path, std::string_view content);

} // namespace hdq::io
