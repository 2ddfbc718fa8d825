#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "wpt/calibration.hpp"
#include "wpt/cut_engine.hpp"
#include "wpt/design_sweep.hpp"
#include "wpt/em_model.hpp"
#include "wpt/mech_model.hpp"
#include "wpt/protocol_sim.hpp"

namespace wpt::io {

using Json = nlohmann::json;

// Sheet spec. Lengths are millimetres; missing fields take the prototype
// defaults, unknown fields are rejected with InputError.
Json to_json(const SheetSpec& spec);
SheetSpec spec_from_json(const Json& j);

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string canonical(const Json& j);
std::string save_spec(const SheetSpec& spec);
/// Parses text; throws InputError on malformed JSON or wrong types.
SheetSpec load_spec(const std::string& text);

Json parse(const std::string& text, const std::string& what);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& data);

Json to_json(const RoutingTree& tree);

Json to_json(const CutScenario& sc);
/// {"cuts":[{"points":[[x_mm,y_mm],...],"closed":false}, ...]}
CutScenario scenario_from_json(const Json& j);

Json to_json(const CutReport& rep, const ChannelXSection& xsec);

Json to_json(const ElectricalReport& r);
Json to_json(const MechReport& r);
Json to_json(const Selection& s);
Json to_json(const std::vector<SweepRow>& rows);
std::string sweep_csv(const std::vector<SweepRow>& rows);

Json to_json(const Calibration& cal);
Calibration calibration_from_json(const Json& j);

/// {"path":[{"t":..,"x":..,"y":..}], "height":.., "q_rx":..}; the RX coil
/// is the sheet coil unless "coil" is given.
RxDevice rx_from_json(const Json& j, const SheetSpec& spec);
Policy policy_from_json(const Json& j);
Json to_json(const StepState& st);
Json to_json(const CoverageMap& map);
std::string coverage_csv(const CoverageMap& map);

Json error_json(const std::string& kind, const std::string& message,
                const std::vector<Violation>& violations = {});

}  // namespace wpt::io
