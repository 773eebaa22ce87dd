#pragma once

#include <vector>

#include "dpd/box.hpp"
#include "dpd/neighbor.hpp"
#include "dpd/params.hpp"
#include "dpd/state.hpp"
#include "dpd/vec.hpp"

namespace dpd {

/// omega^R of Groot-Warren form: 1 - r/r_c inside the cutoff, 0 outside.
/// omega^D is never stored; square this wherever it is needed.
inline double weight_r(double r, double r_c) {
    return r < r_c ? 1.0 - r / r_c : 0.0;
}

/// Soft pair potential, a*r_c*(1 - r/r_c)^2 / 2 inside the cutoff.
inline double pair_potential(double r, const DpdParams& p) {
    if (r >= p.r_c()) return 0.0;
    const double w = 1.0 - r / p.r_c();
    return 0.5 * p.a() * p.r_c() * w * w;
}

/// Geometry of one interacting pair: separation, unit vector from j to i,
/// and the (image-consistent) relative velocity.
struct PairGeometry {
    double r = 0.0;
    Vec3 e;
    Vec3 v_rel;
};

/// Conservative force on particle i; the force on j is the exact negation.
inline Vec3 conservative_pair_force(const PairGeometry& g, const DpdParams& p) {
    if (g.r >= p.r_c()) return {};
    return p.a() * (1.0 - g.r / p.r_c()) * g.e;
}

/// Per-pair geometry cached during a force pass, aligned with the pair list.
struct PairFrame {
    double r = 0.0;
    Vec3 e;
    int y_crossing = 0;
};

struct ForceResult {
    std::vector<Vec3> force;  ///< per-particle conservative force
    double potential = 0.0;   ///< total potential energy
};

struct ForceExtras {
    std::vector<PairFrame>* frames = nullptr;  ///< pair geometry, reused by thermostat sweeps
    Mat3* virial = nullptr;                    ///< accumulates sum over pairs of q_ij (x) F^C_ij
    double* laplacian = nullptr;               ///< accumulates sum_i of laplacian_i U
    long* overlap_skips = nullptr;             ///< counts pairs under the overlap guard
};

/// Total conservative forces and potential energy over the pair list.
/// Forces sum to zero exactly: each pair is accumulated once with +/-.
/// Throws StalePairListError if the list no longer covers the positions.
ForceResult total_conservative(const SystemState& state, const PairList& pairs, const SimBox& box,
                               const DpdParams& params, const ForceExtras& extras = {});

/// Ingredients of the configurational temperature estimator,
/// kT = <sum_i |grad_i U|^2> / <sum_i lap_i U>, plus the potential energy.
struct ConfigSample {
    double potential = 0.0;
    double grad_sq = 0.0;
    double laplacian = 0.0;
};

ConfigSample measure_configurational(const SystemState& state, const PairList& pairs,
                                     const SimBox& box, const DpdParams& params);

}  // namespace dpd
