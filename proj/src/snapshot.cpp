#include "rdsym/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rdsym/csv_io.hpp"

namespace rdsym {

std::string field_to_pgm(const ScalarField& field) {
    const int n = field.grid.nodes_per_side;
    const double peak = std::max(field.max_value(), 0.0);
    std::string out = "P2\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
    for (int iy = n - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < n; ++ix) {
            const double v = field.at(ix, iy);
            int level = 0;
            if (peak > 0.0 && v > 0.0)
                level = std::min(255, static_cast<int>(std::lround(v / peak * 255.0)));
            out += std::to_string(level);
            out += ix + 1 < n ? ' ' : '\n';
        }
    }
    return out;
}

std::string field_to_grid_csv(const ScalarField& field) {
    const int n = field.grid.nodes_per_side;
    std::string out;
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            out += format_double(field.at(ix, iy));
            out += ix + 1 < n ? ',' : '\n';
        }
    }
    return out;
}

std::string snapshot_basename(const std::string& prefix, double time) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "_t%.4f", time);
    return prefix + buf;
}

} // namespace rdsym
