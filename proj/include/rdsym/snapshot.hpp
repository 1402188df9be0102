// Field snapshot serialization: 8-bit P2 portable graymaps and raw grid CSV.
#pragma once

#include <string>

#include "rdsym/fields.hpp"

namespace rdsym {

// P2 PGM, maxval 255, values scaled by the field's recorded maximum.
// Top raster row is y = +L.
std::string field_to_pgm(const ScalarField& field);

// Raw node values, one row per y level (ascending), shortest round-trip decimals.
std::string field_to_grid_csv(const ScalarField& field);

// "<prefix>_t<time with 4 decimals>" (extension appended by the caller).
std::string snapshot_basename(const std::string& prefix, double time);

} // namespace rdsym
