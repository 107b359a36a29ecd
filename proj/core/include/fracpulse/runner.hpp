#pragma once

#include <string>
#include <vector>

#include "fracpulse/config.hpp"
#include "fracpulse/optimizer.hpp"

namespace fracpulse {

/// Each command consumes a validated RunConfig, writes its output files and
/// returns the paths written, in deterministic order.
std::vector<std::string> cmd_autocor(const RunConfig& cfg);
std::vector<std::string> cmd_psd(const RunConfig& cfg);
std::vector<std::string> cmd_sweep(const RunConfig& cfg);
std::vector<std::string> cmd_pulse(const RunConfig& cfg);
std::vector<std::string> cmd_optimize(const RunConfig& cfg);
std::vector<std::string> cmd_validate(const RunConfig& cfg);

/// Sampled-shape JSON (grid nodes/weights, values, endpoint exponent),
/// consumable by ShapeFn::sampled.
nlohmann::json shape_to_json(const ShapeFn& shape);
ShapeFn shape_from_json(const nlohmann::json& j);

nlohmann::json waveform_to_json(const VoltageWaveform& wf);

}  // namespace fracpulse
