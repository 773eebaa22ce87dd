#pragma once

#include <cmath>

#include "dpd/state.hpp"
#include "dpd/vec.hpp"

namespace dpd {

/// Cubic simulation box centered at the origin, optionally sheared by
/// Lees-Edwards sliding-brick boundary conditions in the x-direction with
/// gradient along y. Owns all image conventions.
struct SimBox {
    double edge = 1.0;        ///< box edge length L (all dimensions)
    double shear_rate = 0.0;  ///< kappa = du_x/dy
    double le_offset = 0.0;   ///< accumulated x-shift of the +y image row, in [0, L)

    double volume() const { return edge * edge * edge; }
};

/// Wrap a scalar coordinate into [-L/2, L/2). The +L/2 tie maps to -L/2.
inline double wrap_coord(double v, double L) {
    return v - L * std::floor(v / L + 0.5);
}

/// Componentwise minimum image (plain periodic, no shear).
inline Vec3 minimum_image(const Vec3& dq, const SimBox& box) {
    return {wrap_coord(dq.x, box.edge), wrap_coord(dq.y, box.edge), wrap_coord(dq.z, box.edge)};
}

/// Advance the Lees-Edwards offset by kappa*L*dt, wrapped into [0, L).
inline void advance_offset(SimBox& box, double dt) {
    double o = box.le_offset + box.shear_rate * box.edge * dt;
    o -= box.edge * std::floor(o / box.edge);
    box.le_offset = o;
}

struct ImageSeparation {
    Vec3 r_vec;      ///< q_i - q_j with the sheared minimum-image convention
    int y_crossing;  ///< +1 if the image of j one box above j was used, -1 below, 0 none
};

/// Sheared minimum image. The +y image row is displaced by +le_offset in x;
/// pairs wrapping in y get the matching x correction before the x-wrap.
/// With offset 0 this is identical to minimum_image. Inputs are expected to
/// lie in the primary box.
inline ImageSeparation le_minimum_image(const Vec3& qi, const Vec3& qj, const SimBox& box) {
    const double L = box.edge;
    Vec3 dq = qi - qj;
    int crossing = 0;
    if (dq.y >= 0.5 * L) {
        dq.y -= L;
        dq.x -= box.le_offset;
        crossing = 1;
    } else if (dq.y < -0.5 * L) {
        dq.y += L;
        dq.x += box.le_offset;
        crossing = -1;
    }
    dq.x = wrap_coord(dq.x, L);
    dq.z = wrap_coord(dq.z, L);
    return {dq, crossing};
}

/// Relative velocity v_i - v_j consistent with the image used for the pair:
/// the image row above slides at +kappa*L in x.
inline Vec3 le_relative_velocity(const Vec3& pi, const Vec3& pj, double mi, double mj,
                                 int y_crossing, const SimBox& box) {
    Vec3 v = pi * (1.0 / mi) - pj * (1.0 / mj);
    v.x -= static_cast<double>(y_crossing) * box.shear_rate * box.edge;
    return v;
}

/// Streaming velocity of planar Couette flow, u = kappa * y * e_x.
inline Vec3 streaming_velocity(const Vec3& q, const SimBox& box) {
    return {box.shear_rate * q.y, 0.0, 0.0};
}

/// Wrap all particles into the primary box. Particles crossing the +/-y faces
/// re-enter shifted by -/+le_offset in x and with p_x adjusted by -/+m*kappa*L.
/// Returns the net y-crossing count (+1 per exit through +y, -1 through -y).
long le_wrap(SystemState& state, const SimBox& box);

}  // namespace dpd
