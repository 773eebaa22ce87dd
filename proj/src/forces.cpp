#include "dpd/forces.hpp"

#include "dpd/errors.hpp"

namespace dpd {

ForceResult total_conservative(const SystemState& state, const PairList& pairs, const SimBox& box,
                               const DpdParams& params, const ForceExtras& extras) {
    if (needs_rebuild(state, pairs, box))
        throw StalePairListError("pair list is stale for these positions; rebuild required");

    ForceResult out;
    out.force.assign(state.size(), Vec3{});
    if (extras.frames) {
        extras.frames->clear();
        extras.frames->resize(pairs.size());
    }

    const double r_c = params.r_c();
    const double a = params.a();
    const int d = params.dim();

    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [i, j] = pairs.pairs[k];
        const auto sep = le_minimum_image(state.positions[i], state.positions[j], box);
        const double r = norm(sep.r_vec);

        if (r < kOverlapGuard) {
            if (extras.overlap_skips) ++*extras.overlap_skips;
            if (extras.frames) (*extras.frames)[k] = PairFrame{r, Vec3{}, sep.y_crossing};
            continue;
        }
        const Vec3 e = sep.r_vec * (1.0 / r);
        if (extras.frames) (*extras.frames)[k] = PairFrame{r, e, sep.y_crossing};
        if (r >= r_c) continue;

        const double w = 1.0 - r / r_c;
        const Vec3 f = (a * w) * e;  // force on i; -f on j
        out.force[i] += f;
        out.force[j] -= f;
        out.potential += 0.5 * a * r_c * w * w;

        if (extras.virial) add_outer(*extras.virial, sep.r_vec, f);
        if (extras.laplacian) {
            // lap_i phi = phi'' + (d-1) phi'/r with phi' = -a*w, phi'' = a/r_c;
            // both members of the pair contribute the same amount.
            *extras.laplacian += 2.0 * (a / r_c - (d - 1) * a * w / r);
        }
    }
    return out;
}

ConfigSample measure_configurational(const SystemState& state, const PairList& pairs,
                                     const SimBox& box, const DpdParams& params) {
    ConfigSample s;
    ForceExtras extras;
    extras.laplacian = &s.laplacian;
    const ForceResult fr = total_conservative(state, pairs, box, params, extras);
    s.potential = fr.potential;
    for (const Vec3& f : fr.force) s.grad_sq += norm2(f);  // grad_i U = -F_i
    return s;
}

}  // namespace dpd
