#include "dpd/integrator.hpp"

#include <cmath>

#include "dpd/kernels.hpp"

namespace dpd {

Scheme scheme_from_string(const std::string& name) {
    if (name == "vv") return Scheme::vv;
    if (name == "s1") return Scheme::s1;
    if (name == "aboba") return Scheme::aboba;
    throw ConfigError("unknown integrator '" + name + "' (expected vv, s1, or aboba)");
}

std::string to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::vv: return "vv";
        case Scheme::s1: return "s1";
        default: return "aboba";
    }
}

Simulation::Simulation(SystemState state, SimBox box, DpdParams params, Scheme scheme, double dt,
                       RngStream rng, double skin)
    : state_(std::move(state)),
      box_(box),
      params_(params),
      scheme_(scheme),
      dt_(dt),
      rng_(rng),
      skin_(skin > 0.0 ? skin : kDefaultSkinFraction * params.r_c()) {
    if (dt_ <= 0.0) throw ConfigError("dt must be > 0");
    if (state_.size() < 2) throw ConfigError("need at least 2 particles");
}

void Simulation::ensure_list() {
    if (!have_list_ || needs_rebuild(state_, list_, box_)) {
        list_ = build_pair_list(state_, box_, params_.r_c(), skin_);
        have_list_ = true;
        ++rebuild_count_;
    }
}

const PairList& Simulation::pair_list() {
    ensure_list();
    return list_;
}

void Simulation::check_health() {
    double kinetic2 = 0.0;
    for (std::size_t i = 0; i < state_.size(); ++i) {
        if (!is_finite(state_.positions[i]) || !is_finite(state_.momenta[i]))
            throw DivergenceError(state_.step_index, "non-finite position or momentum");
        kinetic2 += norm2(state_.momenta[i]) / state_.masses[i];
    }
    const double ktemp = kinetic2 / (params_.dim() * static_cast<double>(state_.size()));
    if (!(ktemp < 1e6))
        throw DivergenceError(state_.step_index, "kinetic temperature exceeded 1e6");
}

void Simulation::drift(double h) {
    for (std::size_t i = 0; i < state_.size(); ++i)
        state_.positions[i] += (h / state_.masses[i]) * state_.momenta[i];
    advance_offset(box_, h);
    net_y_crossings_ += le_wrap(state_, box_);
}

void Simulation::kick(const std::vector<Vec3>& force, double h) {
    for (std::size_t i = 0; i < state_.size(); ++i) state_.momenta[i] += h * force[i];
}

void Simulation::eval_conservative() {
    ensure_list();
    ForceExtras extras;
    extras.frames = &frames_;
    extras.overlap_skips = &overlap_skips_;
    laplacian_ = 0.0;
    if (sample_config_) extras.laplacian = &laplacian_;
    ForceResult fr = total_conservative(state_, list_, box_, params_, extras);
    cons_force_ = std::move(fr.force);
    potential_ = fr.potential;
    have_force_cache_ = true;
}

// Full VV force pass at the current positions: conservative + dissipative +
// the realized random impulse, combined into a per-particle impulse
// dt*(F^C + F^D) + dF^R that is applied half now and half next step.
void Simulation::eval_vv_forces(long noise_step) {
    ensure_list();
    vv_impulse_.assign(state_.size(), Vec3{});
    if (sample_config_) cons_force_.assign(state_.size(), Vec3{});
    potential_ = 0.0;
    laplacian_ = 0.0;
    cons_virial_ = Mat3{};

    const double r_c = params_.r_c();
    const double a = params_.a();
    const double gamma = params_.gamma();
    const double sigma = params_.sigma();
    const double sqrt_dt = std::sqrt(dt_);
    const int d = params_.dim();

    for (const auto& [i, j] : list_.pairs) {
        const auto sep = le_minimum_image(state_.positions[i], state_.positions[j], box_);
        const double r = norm(sep.r_vec);
        if (r >= r_c) continue;
        if (r < kOverlapGuard) {
            ++overlap_skips_;
            continue;
        }
        const Vec3 e = sep.r_vec * (1.0 / r);
        const double w = 1.0 - r / r_c;
        const Vec3 f_c = (a * w) * e;
        const Vec3 v_rel = le_relative_velocity(state_.momenta[i], state_.momenta[j],
                                                state_.masses[i], state_.masses[j],
                                                sep.y_crossing, box_);
        const Vec3 f_d = (-gamma * w * w * dot(e, v_rel)) * e;
        const double R = rng_.pair_gaussian(noise_step, i, j);
        const Vec3 impulse = dt_ * (f_c + f_d) + (sigma * w * sqrt_dt * R) * e;

        vv_impulse_[i] += impulse;
        vv_impulse_[j] -= impulse;
        potential_ += 0.5 * a * r_c * w * w;
        if (sample_stress_) add_outer(cons_virial_, sep.r_vec, (1.0 / dt_) * impulse);
        if (sample_config_) {
            cons_force_[i] += f_c;
            cons_force_[j] -= f_c;
            laplacian_ += 2.0 * (a / r_c - (d - 1) * a * w / r);
        }
    }
    have_force_cache_ = true;
}

// Sequential BBK sweep over the listed pairs (lexicographic order; each
// update sees momenta already modified by earlier pairs).
void Simulation::thermostat_sweep_bbk() {
    for (std::size_t k = 0; k < list_.pairs.size(); ++k) {
        const auto [i, j] = list_.pairs[k];
        const PairFrame& fr = frames_[k];
        if (fr.r >= params_.r_c() || fr.r < kOverlapGuard) continue;
        PairGeometry g{fr.r, fr.e,
                       le_relative_velocity(state_.momenta[i], state_.momenta[j],
                                            state_.masses[i], state_.masses[j], fr.y_crossing,
                                            box_)};
        const double R = rng_.pair_gaussian(state_.step_index, i, j);
        const PairKick kick = bbk_pair_kick(state_.masses[i], state_.masses[j], g, params_, dt_, R);
        state_.momenta[i] += kick.dp;
        state_.momenta[j] -= kick.dp;
        if (sample_stress_) add_outer(step_virial_, fr.r * fr.e, (1.0 / dt_) * kick.dp_random);
    }
}

void Simulation::thermostat_sweep_ou() {
    for (std::size_t k = 0; k < list_.pairs.size(); ++k) {
        const auto [i, j] = list_.pairs[k];
        const PairFrame& fr = frames_[k];
        if (fr.r >= params_.r_c() || fr.r < kOverlapGuard) continue;
        PairGeometry g{fr.r, fr.e,
                       le_relative_velocity(state_.momenta[i], state_.momenta[j],
                                            state_.masses[i], state_.masses[j], fr.y_crossing,
                                            box_)};
        const double R = rng_.pair_gaussian(state_.step_index, i, j);
        const PairKick kick = ou_pair_kick(state_.masses[i], state_.masses[j], g, params_, dt_, R);
        state_.momenta[i] += kick.dp;
        state_.momenta[j] -= kick.dp;
        if (sample_stress_) add_outer(step_virial_, fr.r * fr.e, (1.0 / dt_) * kick.dp_random);
    }
}

void Simulation::step() {
    step_virial_ = Mat3{};
    config_from_eval_ = false;

    switch (scheme_) {
        case Scheme::vv: {
            // Half-kick with forces cached from the previous step's end (a
            // fresh start computes them first), drift, one full force pass at
            // the new positions, half-kick. The pass is reused next step.
            if (!have_force_cache_) eval_vv_forces(state_.step_index);
            for (std::size_t i = 0; i < state_.size(); ++i)
                state_.momenta[i] += 0.5 * vv_impulse_[i];
            drift(dt_);
            eval_vv_forces(state_.step_index + 1);
            for (std::size_t i = 0; i < state_.size(); ++i)
                state_.momenta[i] += 0.5 * vv_impulse_[i];
            step_virial_ += cons_virial_;
            config_from_eval_ = sample_config_;
            break;
        }
        case Scheme::s1: {
            // OBAB: BBK pair sweep at q^n (geometry cached from the previous
            // step's force pass), then velocity Verlet on the Hamiltonian
            // part with one conservative-force evaluation at q^{n+1}.
            if (!have_force_cache_) eval_conservative();
            thermostat_sweep_bbk();
            kick(cons_force_, 0.5 * dt_);
            drift(dt_);
            eval_conservative();
            kick(cons_force_, 0.5 * dt_);
            config_from_eval_ = sample_config_;
            break;
        }
        case Scheme::aboba: {
            // Half-drift, single force/geometry evaluation at the midpoint,
            // half-kick, OU pair sweep on midpoint geometry, half-kick with
            // the same force, half-drift.
            drift(0.5 * dt_);
            eval_conservative();
            kick(cons_force_, 0.5 * dt_);
            thermostat_sweep_ou();
            kick(cons_force_, 0.5 * dt_);
            drift(0.5 * dt_);
            break;
        }
    }

    ++state_.step_index;
    check_health();
}

Mat3 Simulation::stress_tensor() const {
    // step_virial_ holds the per-step realized random impulses / dt for
    // s1/aboba, and the full force-pass virial (F^C + F^D + dF^R/dt at
    // q^{n+1}) for vv. For s1/aboba the conservative and dissipative parts
    // are instantaneous forces at the endpoint state, evaluated here over the
    // current pair list (no rebuild: measurement must not perturb the
    // trajectory; the list still covers every pair within the cutoff).
    Mat3 acc = step_virial_;
    if (scheme_ != Scheme::vv) {
        const double r_c = params_.r_c();
        for (const auto& [i, j] : list_.pairs) {
            const auto sep = le_minimum_image(state_.positions[i], state_.positions[j], box_);
            const double r = norm(sep.r_vec);
            if (r >= r_c || r < kOverlapGuard) continue;
            const Vec3 e = sep.r_vec * (1.0 / r);
            const double w = 1.0 - r / r_c;
            const Vec3 v_rel = le_relative_velocity(state_.momenta[i], state_.momenta[j],
                                                    state_.masses[i], state_.masses[j],
                                                    sep.y_crossing, box_);
            const Vec3 f = (params_.a() * w - params_.gamma() * w * w * dot(e, v_rel)) * e;
            add_outer(acc, sep.r_vec, f);
        }
    }
    const bool sheared = box_.shear_rate != 0.0;
    for (std::size_t i = 0; i < state_.size(); ++i) {
        Vec3 v = state_.velocity(i);
        if (sheared) v -= streaming_velocity(state_.positions[i], box_);
        add_outer(acc, state_.masses[i] * v, v);
    }
    acc *= -1.0 / box_.volume();
    return acc;
}

ConfigSample Simulation::config_sample() {
    if (config_from_eval_) {
        ConfigSample s;
        s.potential = potential_;
        s.laplacian = laplacian_;
        for (const Vec3& f : cons_force_) s.grad_sq += norm2(f);
        return s;
    }
    ensure_list();
    return measure_configurational(state_, list_, box_, params_);
}

}  // namespace dpd
