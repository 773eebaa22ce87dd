#pragma once

#include <cmath>

#include "dpd/forces.hpp"
#include "dpd/params.hpp"
#include "dpd/vec.hpp"

namespace dpd {

/// Momentum transfer of one pair update; +dp goes to i and -dp to j, so the
/// pair's total momentum change is exactly zero by construction. dp_random is
/// the random-only part of the realized impulse (the update is linear in the
/// noise, so the split is exact); divided by dt it is the random force's
/// stress-virial contribution. The dissipative part enters the stress as the
/// instantaneous force at the sampling state instead -- its realized impulse
/// saturates at |m_ij v0| for tau dt >> 1 and would under-report the
/// dissipative momentum flux at large friction.
struct PairKick {
    Vec3 dp;
    Vec3 dp_random;
};

namespace detail {

// sqrt((1 - e^{-2 tau dt}) / (2 tau)), with the tau -> 0 series limit
// sqrt(dt) * (1 - tau dt / 2) below tau*dt = 1e-8 to avoid 0/0 (omega^D
// vanishes at the cutoff, so tau spans many orders of magnitude).
inline double ou_noise_width(double tau, double dt) {
    const double taudt = tau * dt;
    if (taudt < 1e-8) return std::sqrt(dt) * (1.0 - 0.5 * taudt);
    return std::sqrt((1.0 - std::exp(-2.0 * taudt)) / (2.0 * tau));
}

}  // namespace detail

/// Exact Ornstein-Uhlenbeck update of the pair's relative velocity along the
/// line of centres:
///   dv = (e.v_ij)(e^{-tau dt} - 1) + (sigma w^R / m_ij) * width(tau, dt) * R,
/// tau = gamma w^D / m_ij, m_ij the reduced mass. Components of v_ij
/// orthogonal to e are untouched. Identity beyond the cutoff.
inline PairKick ou_pair_kick(double m_i, double m_j, const PairGeometry& g, const DpdParams& p,
                             double dt, double R) {
    const double wr = weight_r(g.r, p.r_c());
    if (wr == 0.0 || g.r < kOverlapGuard) return {};
    const double wd = wr * wr;
    const double m_ij = m_i * m_j / (m_i + m_j);
    const double tau = p.gamma() * wd / m_ij;
    const double v0 = dot(g.e, g.v_rel);
    const double decay = std::exp(-tau * dt);
    const double noise = p.sigma() * wr * detail::ou_noise_width(tau, dt) * R;  // impulse
    const double dv = v0 * (decay - 1.0) + noise / m_ij;
    return {(m_ij * dv) * g.e, noise * g.e};
}

inline void ou_pair_update(Vec3& p_i, Vec3& p_j, double m_i, double m_j, const PairGeometry& g,
                           const DpdParams& p, double dt, double R) {
    const PairKick kick = ou_pair_kick(m_i, m_j, g, p, dt, R);
    p_i += kick.dp;
    p_j -= kick.dp;
}

/// BBK discretization of the pair OU step, as used by Shardlow's S1 sweep:
/// two half-kicks with K_ij = gamma w^D dt/2 and J_ij = sigma w^R e sqrt(dt) R / 2,
/// the second half implicit through the 1/(1 + 2 K_ij) factor.
inline PairKick bbk_pair_kick(double m_i, double m_j, const PairGeometry& g, const DpdParams& p,
                              double dt, double R) {
    const double wr = weight_r(g.r, p.r_c());
    if (wr == 0.0 || g.r < kOverlapGuard) return {};
    const double wd = wr * wr;
    const double K = 0.5 * p.gamma() * wd * dt;
    const double Js = 0.5 * p.sigma() * wr * std::sqrt(dt) * R;  // J_ij = Js * e
    const double inv_m = 1.0 / m_i + 1.0 / m_j;

    const double v0 = dot(g.e, g.v_rel);
    const double dp1 = -K * v0 + Js;            // first half-kick along e
    const double v1 = v0 + inv_m * dp1;         // relative velocity after it
    const double dp2 = Js - K / (1.0 + 2.0 * K) * (v1 + 2.0 * Js);
    // Random-only realized impulse: set v0 = 0 and retrace both half-kicks.
    const double dp2_r = Js - K / (1.0 + 2.0 * K) * (inv_m * Js + 2.0 * Js);
    return {(dp1 + dp2) * g.e, (Js + dp2_r) * g.e};
}

inline void bbk_pair_update(Vec3& p_i, Vec3& p_j, double m_i, double m_j, const PairGeometry& g,
                            const DpdParams& p, double dt, double R) {
    const PairKick kick = bbk_pair_kick(m_i, m_j, g, p, dt, R);
    p_i += kick.dp;
    p_j -= kick.dp;
}

}  // namespace dpd
