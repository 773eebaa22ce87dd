#pragma once

#include <cstddef>
#include <vector>

#include "dpd/vec.hpp"

namespace dpd {

/// The evolving phase point: positions, momenta, masses, step counter.
struct SystemState {
    std::vector<Vec3> positions;
    std::vector<Vec3> momenta;
    std::vector<double> masses;
    long step_index = 0;

    std::size_t size() const { return positions.size(); }

    Vec3 velocity(std::size_t i) const { return momenta[i] * (1.0 / masses[i]); }

    Vec3 total_momentum() const {
        Vec3 p;
        for (const auto& pi : momenta) p += pi;
        return p;
    }
};

}  // namespace dpd
