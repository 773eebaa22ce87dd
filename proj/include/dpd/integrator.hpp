#pragma once

#include <string>
#include <vector>

#include "dpd/box.hpp"
#include "dpd/errors.hpp"
#include "dpd/forces.hpp"
#include "dpd/neighbor.hpp"
#include "dpd/params.hpp"
#include "dpd/rng.hpp"
#include "dpd/state.hpp"

namespace dpd {

enum class Scheme { vv, s1, aboba };

Scheme scheme_from_string(const std::string& name);  // throws ConfigError
std::string to_string(Scheme scheme);

/// Default Verlet skin, as a fraction of r_c.
inline constexpr double kDefaultSkinFraction = 0.3;

/// One DPD trajectory under a fixed stepping scheme. A Simulation owns its
/// state, box, neighbor list, and cached forces; a single step() call is
/// single-threaded by contract. Independent replicas (different seeds) share
/// nothing mutable and may run concurrently.
class Simulation {
  public:
    Simulation(SystemState state, SimBox box, DpdParams params, Scheme scheme, double dt,
               RngStream rng, double skin = -1.0);

    /// Advance one step. Throws DivergenceError on non-finite coordinates or
    /// runaway kinetic temperature.
    void step();

    const SystemState& state() const { return state_; }
    const SimBox& box() const { return box_; }
    const DpdParams& params() const { return params_; }
    Scheme scheme() const { return scheme_; }
    double dt() const { return dt_; }

    /// Collect the per-step random-impulse virial while stepping; together
    /// with the instantaneous conservative and dissipative forces at the
    /// endpoint it forms the Irving-Kirkwood stress (see stress_tensor()).
    void set_sample_stress(bool on) { sample_stress_ = on; }
    /// Collect configurational-temperature ingredients at step endpoints.
    void set_sample_config(bool on) { sample_config_ = on; }

    /// Stress tensor for the step just completed (requires stress sampling).
    Mat3 stress_tensor() const;

    /// Potential, |grad U|^2 and laplacian of U at the current (endpoint)
    /// positions. Free for vv/s1 when config sampling is on; costs one extra
    /// pair pass per call for aboba (its force pass sits at the midpoint).
    ConfigSample config_sample();

    /// Pair list valid for the current positions (rebuilding if stale).
    const PairList& pair_list();

    long overlap_skips() const { return overlap_skips_; }
    long net_y_crossings() const { return net_y_crossings_; }
    long rebuild_count() const { return rebuild_count_; }

  private:
    void ensure_list();
    void check_health();
    void drift(double h);
    void kick(const std::vector<Vec3>& force, double h);
    void eval_conservative();
    void eval_vv_forces(long noise_step);
    void thermostat_sweep_bbk();
    void thermostat_sweep_ou();

    SystemState state_;
    SimBox box_;
    DpdParams params_;
    Scheme scheme_;
    double dt_;
    RngStream rng_;
    double skin_;

    PairList list_;
    bool have_list_ = false;

    // Cross-step caches so each scheme computes forces only once per step.
    std::vector<PairFrame> frames_;     // pair geometry at the last force eval
    std::vector<Vec3> cons_force_;      // conservative force (s1/aboba; vv when sampling)
    std::vector<Vec3> vv_impulse_;      // vv: dt*(F^C+F^D) + realized dF^R per particle
    bool have_force_cache_ = false;
    double potential_ = 0.0;
    double laplacian_ = 0.0;
    Mat3 cons_virial_;                  // vv only: full force-pass virial

    bool sample_stress_ = false;
    bool sample_config_ = false;
    Mat3 step_virial_;                  // s1/aboba: realized random impulses / dt
    bool config_from_eval_ = false;

    long overlap_skips_ = 0;
    long net_y_crossings_ = 0;
    long rebuild_count_ = 0;
};

}  // namespace dpd
