#include "dpd/box.hpp"

namespace dpd {

long le_wrap(SystemState& state, const SimBox& box) {
    const double L = box.edge;
    long net_crossings = 0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        Vec3& q = state.positions[i];
        // y first: each y-crossing drags an x-shift and a momentum kick with it.
        const double ny = std::floor(q.y / L + 0.5);
        if (ny != 0.0) {
            q.y -= ny * L;
            q.x -= ny * box.le_offset;
            state.momenta[i].x -= ny * state.masses[i] * box.shear_rate * L;
            net_crossings += static_cast<long>(ny);
        }
        q.x = wrap_coord(q.x, L);
        q.z = wrap_coord(q.z, L);
    }
    return net_crossings;
}

}  // namespace dpd
