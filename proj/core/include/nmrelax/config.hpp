// config.hpp — Flat key-value run configuration (params + grid)

#pragma once

#include <iosfwd>
#include <string>

#include "nmrelax/model.hpp"

namespace nmrelax {

struct RunConfig {
    ModelParams params;
    TimeGrid grid{0.0, 1.0, 1001};
};

/// Parses a flat `key = value` config. Angular-frequency keys accept either
/// a `*_radps` or a `*_hz` spelling (the latter is multiplied by 2*pi on
/// load). Unknown keys and duplicate/conflicting spellings are errors.
///
/// Recognised keys: gamma_I_radps, gamma_II_radps, J_radps | J_hz,
/// omega1_radps | omega1_hz, n, t_start_s, t_end_s, samples.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Serialises with 17 significant digits so a load/save cycle is exact.
void write_config(std::ostream& out, const RunConfig& cfg);

}  // namespace nmrelax
