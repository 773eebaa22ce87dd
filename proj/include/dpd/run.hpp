#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dpd/integrator.hpp"
#include "dpd/observables.hpp"

namespace dpd {

enum class Boundary { periodic, lees_edwards };

/// One experiment description; maps 1:1 onto the flat `key = value` config
/// file format.
struct RunConfig {
    int n_particles = 500;
    double density = 3.0;
    double a = 25.0;
    double gamma = 4.5;
    double kbt = 1.0;
    double r_c = 1.0;
    Scheme integrator = Scheme::aboba;
    double dt = 0.05;
    double t_total = 1000.0;  ///< reduced time units
    double equilibration_fraction = 0.2;
    std::uint64_t seed = 1;
    int n_replicas = 10;
    Boundary boundary = Boundary::periodic;
    double shear_rate = 0.0;
    std::string outputs = ".";

    long n_steps() const;
    double box_edge() const;  ///< L = (N / density)^{1/3}
    SimBox make_box() const;
    DpdParams make_params() const;

    void validate() const;  // throws ConfigError
};

/// Parse `key = value` lines ('#' comments, blank lines allowed).
RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::string& path);
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

/// Deterministic initial condition: uniform positions, Gaussian momenta of
/// variance m*kT with the center-of-mass motion removed, plus the streaming
/// velocity under shear. Pure function of the config and replica index.
SystemState initial_state(const RunConfig& cfg, int replica_index);

struct ObsRow {
    long step;
    double time;
    double kinetic_temp;
    double ctemp_num;
    double ctemp_den;
    double potential;
    Vec3 total_momentum;
    double stress_xy;
};

struct ReplicaOptions {
    bool sample_stress = false;
    bool sample_rdf = false;
    int rdf_stride = 10;
    double rdf_bin_width = 0.01;
    double rdf_max_r = -1.0;  ///< defaults to L/2
    bool sample_profile = false;
    int profile_bins = 20;
    bool capture_rows = false;  ///< keep per-step rows (for observables.csv)
};

struct ReplicaResult {
    ObservableSeries series;
    bool diverged = false;
    long diverged_step = -1;
    RdfHistogram rdf;
    VelocityProfile profile;
    std::vector<ObsRow> rows;
    long overlap_skips = 0;
    long net_y_crossings = 0;
};

/// Run one trajectory; replica seed = cfg.seed + replica_index.
ReplicaResult run_replica(const RunConfig& cfg, int replica_index, const ReplicaOptions& opts = {});

struct RunSummary {
    bool diverged = false;
    long diverged_step = -1;
    int diverged_replica = -1;
    ObservableSeries merged;
    RdfHistogram rdf;
    VelocityProfile profile;
    int replicas_run = 0;
};

/// Run all replicas, merge accumulators, and (when `write_outputs`) emit
/// observables.csv plus rdf.csv / stress.csv when those samplers are enabled.
RunSummary run_simulation(const RunConfig& cfg, const ReplicaOptions& opts = {},
                          bool write_outputs = false);

enum class SweepObservable { ctemp, ktemp };
SweepObservable sweep_observable_from_string(const std::string& name);

struct SweepRow {
    double dt;
    double observable_mean;
    double rel_error;
    double std_err;
    bool diverged;
};

struct SweepResult {
    std::vector<SweepRow> rows;       ///< sorted ascending by dt
    double fitted_slope;              ///< log-log slope over the stable low-error rows
    SweepObservable observable;
};

/// Stepsize sweep: dt grows geometrically from dt_start until a run diverges
/// or its relative error exceeds 100%. Relative error is measured against
/// kT for temperature observables.
SweepResult convergence_sweep(RunConfig base, double dt_start, double dt_growth,
                              SweepObservable observable);

/// Log-log interpolation of the stepsize at which the relative error crosses
/// `threshold`. Throws ConfigError when the sweep never straddles it.
double critical_stepsize(const SweepResult& sweep, double threshold);

struct EfficiencyEntry {
    std::string method;
    double critical_dt;
    double ms_per_step;
};

struct EfficiencyRow {
    std::string method;
    double critical_dt;
    double ms_per_step;
    double scaled_efficiency_pct;
};

/// Scaled efficiency (dt*/time) / (dt*_base/time_base) in percent.
std::vector<EfficiencyRow> efficiency_table(const std::vector<EfficiencyEntry>& entries,
                                            const std::string& baseline);

/// Wall time per integration step in milliseconds, measured without any
/// observable computation.
double time_steps_ms(const RunConfig& cfg, long steps);

// CSV emission (deterministic, byte-stable for fixed inputs).
void write_observables_csv(const std::string& path, const std::vector<ObsRow>& rows);
void write_stress_csv(const std::string& path, const std::vector<ObsRow>& rows);
void write_rdf_csv(const std::string& path, const std::vector<RdfHistogram::Row>& rows);
void write_sweep_csv(const std::string& path, const SweepResult& sweep);
SweepResult read_sweep_csv(const std::string& path);
void write_efficiency_csv(const std::string& path, const std::vector<EfficiencyRow>& rows);

}  // namespace dpd
