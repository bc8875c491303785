#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "pvstab/energy.hpp"
#include "pvstab/scan.hpp"
#include "pvstab/spectral.hpp"
#include "pvstab/state.hpp"

namespace pvstab {

// Keys: p, v, H, Hv, E, S, kappa, epsilon, rho, a (rho and a optional).
// E may be a number (E1) or an array whose missing or null E2, E3 entries are
// filled from the interface constraints. Throws InvalidInput.
EquilibriumState state_from_json(const nlohmann::json& j);
nlohmann::json state_to_json(const EquilibriumState& s);

nlohmann::json report_to_json(const StabilityReport& r);
nlohmann::json root_to_json(const ModeRoot& r);
nlohmann::json matrices_to_json(const EquilibriumState& s);
nlohmann::json scan_spec_to_json(const ScanSpec& s);

std::string read_file(const std::string& path);
// Writes to a temporary sibling and renames it over path. Throws IOError.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace pvstab
