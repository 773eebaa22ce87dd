#include "dpd/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace dpd {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse number '" + value + "'");
    }
}

long parse_long(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v != std::floor(v)) throw ConfigError("config key '" + key + "': expected integer");
    return static_cast<long>(v);
}

std::string format_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

long RunConfig::n_steps() const {
    return static_cast<long>(std::floor(t_total / dt + 1e-9));
}

double RunConfig::box_edge() const {
    return std::cbrt(static_cast<double>(n_particles) / density);
}

SimBox RunConfig::make_box() const {
    SimBox box;
    box.edge = box_edge();
    box.shear_rate = boundary == Boundary::lees_edwards ? shear_rate : 0.0;
    box.le_offset = 0.0;
    return box;
}

DpdParams RunConfig::make_params() const {
    return DpdParams(a, gamma, kbt, r_c);
}

void RunConfig::validate() const {
    if (n_particles < 2) throw ConfigError("n_particles must be >= 2");
    if (density <= 0.0) throw ConfigError("density must be > 0");
    if (dt <= 0.0) throw ConfigError("dt must be > 0");
    if (t_total <= 0.0) throw ConfigError("t_total must be > 0");
    if (n_steps() < 1) throw ConfigError("t_total/dt must give at least one step");
    if (equilibration_fraction < 0.0 || equilibration_fraction >= 1.0)
        throw ConfigError("equilibration_fraction must be in [0, 1)");
    if (n_replicas < 1) throw ConfigError("n_replicas must be >= 1");
    if (shear_rate != 0.0 && boundary != Boundary::lees_edwards)
        throw ConfigError("shear_rate requires boundary = lees_edwards");
    make_params();  // parameter range checks
}

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "n_particles") cfg.n_particles = static_cast<int>(parse_long(key, value));
    else if (key == "density") cfg.density = parse_double(key, value);
    else if (key == "a") cfg.a = parse_double(key, value);
    else if (key == "gamma") cfg.gamma = parse_double(key, value);
    else if (key == "kbt") cfg.kbt = parse_double(key, value);
    else if (key == "r_c") cfg.r_c = parse_double(key, value);
    else if (key == "integrator") cfg.integrator = scheme_from_string(value);
    else if (key == "dt") cfg.dt = parse_double(key, value);
    else if (key == "t_total") cfg.t_total = parse_double(key, value);
    else if (key == "equilibration_fraction") cfg.equilibration_fraction = parse_double(key, value);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_long(key, value));
    else if (key == "n_replicas") cfg.n_replicas = static_cast<int>(parse_long(key, value));
    else if (key == "boundary") {
        if (value == "periodic") cfg.boundary = Boundary::periodic;
        else if (value == "lees_edwards") cfg.boundary = Boundary::lees_edwards;
        else throw ConfigError("boundary must be 'periodic' or 'lees_edwards'");
    } else if (key == "shear_rate") cfg.shear_rate = parse_double(key, value);
    else if (key == "outputs") cfg.outputs = value;
    else throw ConfigError("unknown config key '" + key + "'");
}

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    cfg.validate();
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

SystemState initial_state(const RunConfig& cfg, int replica_index) {
    const RngStream rng(cfg.seed + static_cast<std::uint64_t>(replica_index));
    const double L = cfg.box_edge();
    const std::size_t n = static_cast<std::size_t>(cfg.n_particles);

    SystemState state;
    state.positions.resize(n);
    state.momenta.resize(n);
    state.masses.assign(n, 1.0);

    for (std::size_t i = 0; i < n; ++i) {
        for (int axis = 0; axis < 3; ++axis) {
            state.positions[i][axis] =
                (rng.uniform(RngStream::kInitPosDomain ^ static_cast<std::uint64_t>(axis), i) - 0.5) * L;
            state.momenta[i][axis] =
                std::sqrt(state.masses[i] * cfg.kbt) *
                rng.gaussian(RngStream::kInitMomDomain ^ static_cast<std::uint64_t>(axis), i);
        }
    }

    // Remove the center-of-mass drift so conserved total momentum starts at zero.
    Vec3 mean = state.total_momentum() * (1.0 / static_cast<double>(n));
    for (auto& p : state.momenta) p -= mean;

    if (cfg.boundary == Boundary::lees_edwards && cfg.shear_rate != 0.0) {
        SimBox box = cfg.make_box();
        for (std::size_t i = 0; i < n; ++i)
            state.momenta[i] += state.masses[i] * streaming_velocity(state.positions[i], box);
    }
    return state;
}

ReplicaResult run_replica(const RunConfig& cfg, int replica_index, const ReplicaOptions& opts) {
    cfg.validate();
    const SimBox box0 = cfg.make_box();
    const DpdParams params = cfg.make_params();

    ReplicaResult res;
    if (opts.sample_rdf) {
        const double max_r = opts.rdf_max_r > 0.0 ? opts.rdf_max_r : 0.5 * box0.edge;
        res.rdf = RdfHistogram(opts.rdf_bin_width, max_r);
    }
    if (opts.sample_profile) res.profile = VelocityProfile(opts.profile_bins, box0.edge);
    res.series.equilibration_fraction = cfg.equilibration_fraction;

    Simulation sim(initial_state(cfg, replica_index), box0, params, cfg.integrator, cfg.dt,
                   RngStream(cfg.seed + static_cast<std::uint64_t>(replica_index)));
    sim.set_sample_config(true);
    sim.set_sample_stress(opts.sample_stress);

    const long n_steps = cfg.n_steps();
    const long n_equil = static_cast<long>(std::floor(cfg.equilibration_fraction * n_steps));

    for (long s = 1; s <= n_steps; ++s) {
        try {
            sim.step();
        } catch (const DivergenceError& e) {
            res.diverged = true;
            res.diverged_step = e.step();
            break;
        }

        const bool post_eq = s > n_equil;
        const bool want_row = opts.capture_rows;
        if (!post_eq && !want_row) continue;

        const ConfigSample cs = sim.config_sample();
        const double ktemp = kinetic_temperature(sim.state(), sim.box(), params.dim());
        double sxy = 0.0;
        if (opts.sample_stress) sxy = sim.stress_tensor()(0, 1);

        if (post_eq) {
            res.series.kinetic_temp.add(ktemp);
            res.series.ctemp_num.add(cs.grad_sq);
            res.series.ctemp_den.add(cs.laplacian);
            res.series.potential.add(cs.potential);
            if (opts.sample_stress) res.series.stress_xy.add(sxy);
            if (opts.sample_rdf && s % opts.rdf_stride == 0)
                res.rdf.accumulate(sim.state(), sim.box());
            if (opts.sample_profile) res.profile.accumulate(sim.state());
        }
        if (want_row) {
            res.rows.push_back({s, s * cfg.dt, ktemp, cs.grad_sq, cs.laplacian, cs.potential,
                                sim.state().total_momentum(), sxy});
        }
    }
    res.overlap_skips = sim.overlap_skips();
    res.net_y_crossings = sim.net_y_crossings();
    return res;
}

RunSummary run_simulation(const RunConfig& cfg, const ReplicaOptions& opts_in, bool write_outputs) {
    cfg.validate();
    ReplicaOptions opts = opts_in;
    if (write_outputs) opts.capture_rows = true;

    RunSummary summary;
    std::vector<ObsRow> rows0;
    for (int r = 0; r < cfg.n_replicas; ++r) {
        ReplicaOptions ropts = opts;
        ropts.capture_rows = opts.capture_rows && r == 0;
        ReplicaResult res = run_replica(cfg, r, ropts);
        if (r == 0) rows0 = std::move(res.rows);
        if (res.diverged) {
            summary.diverged = true;
            summary.diverged_step = res.diverged_step;
            summary.diverged_replica = r;
            break;
        }
        summary.merged.merge(res.series);
        if (opts.sample_rdf) {
            if (r == 0) summary.rdf = res.rdf;
            else summary.rdf.merge(res.rdf);
        }
        if (opts.sample_profile) {
            if (r == 0) summary.profile = res.profile;
            else summary.profile.merge(res.profile);
        }
        ++summary.replicas_run;
    }

    if (write_outputs) {
        std::filesystem::create_directories(cfg.outputs);
        const auto dir = std::filesystem::path(cfg.outputs);
        write_observables_csv((dir / "observables.csv").string(), rows0);
        if (opts.sample_rdf && !summary.diverged)
            write_rdf_csv((dir / "rdf.csv").string(),
                          summary.rdf.finalize(static_cast<std::size_t>(cfg.n_particles),
                                               cfg.make_box()));
        if (opts.sample_stress) write_stress_csv((dir / "stress.csv").string(), rows0);
    }
    return summary;
}

SweepObservable sweep_observable_from_string(const std::string& name) {
    if (name == "ctemp") return SweepObservable::ctemp;
    if (name == "ktemp") return SweepObservable::ktemp;
    throw ConfigError("unknown sweep observable '" + name + "' (expected ctemp or ktemp)");
}

SweepResult convergence_sweep(RunConfig base, double dt_start, double dt_growth,
                              SweepObservable observable) {
    if (dt_start <= 0.0) throw ConfigError("sweep dt_start must be > 0");
    if (dt_growth <= 1.0) throw ConfigError("sweep dt_growth must be > 1");

    SweepResult result;
    result.observable = observable;
    constexpr int kMaxRows = 100;

    double dt = dt_start;
    for (int k = 0; k < kMaxRows; ++k, dt *= dt_growth) {
        base.dt = dt;
        SweepRow row{dt, 0.0, 0.0, 0.0, false};

        ObservableSeries merged;
        std::vector<double> replica_means;
        for (int r = 0; r < base.n_replicas; ++r) {
            ReplicaResult res = run_replica(base, r);
            if (res.diverged) {
                row.diverged = true;
                break;
            }
            merged.merge(res.series);
            replica_means.push_back(observable == SweepObservable::ctemp
                                        ? res.series.configurational_temperature()
                                        : res.series.kinetic_temp.mean());
        }

        if (!row.diverged) {
            row.observable_mean = observable == SweepObservable::ctemp
                                      ? merged.configurational_temperature()
                                      : merged.kinetic_temp.mean();
            row.rel_error = std::fabs(row.observable_mean - base.kbt) / base.kbt;
            if (replica_means.size() > 1) {
                Accumulator acc;
                for (double m : replica_means) acc.add(m);
                row.std_err = acc.sem();
            }
        }
        result.rows.push_back(row);
        if (row.diverged || row.rel_error > 1.0) break;
    }

    // Slope of the stable low-error region (non-diverged, error <= 50%).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& row : result.rows) {
        if (row.diverged || row.rel_error <= 0.0 || row.rel_error > 0.5) continue;
        const double lx = std::log(row.dt), ly = std::log(row.rel_error);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    result.fitted_slope =
        n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : std::nan("");
    return result;
}

double critical_stepsize(const SweepResult& sweep, double threshold) {
    std::vector<const SweepRow*> valid;
    for (const auto& row : sweep.rows)
        if (!row.diverged) valid.push_back(&row);

    for (std::size_t k = 0; k < valid.size(); ++k) {
        if (valid[k]->rel_error == threshold) return valid[k]->dt;
        if (k + 1 < valid.size() && valid[k]->rel_error < threshold &&
            valid[k + 1]->rel_error >= threshold) {
            const double e0 = valid[k]->rel_error, e1 = valid[k + 1]->rel_error;
            if (e0 <= 0.0) return valid[k + 1]->dt;
            const double t = (std::log(threshold) - std::log(e0)) / (std::log(e1) - std::log(e0));
            return std::exp(std::log(valid[k]->dt) +
                            t * (std::log(valid[k + 1]->dt) - std::log(valid[k]->dt)));
        }
    }
    throw ConfigError("critical stepsize not determined: sweep does not straddle the threshold");
}

std::vector<EfficiencyRow> efficiency_table(const std::vector<EfficiencyEntry>& entries,
                                            const std::string& baseline) {
    const EfficiencyEntry* base = nullptr;
    for (const auto& e : entries)
        if (e.method == baseline) base = &e;
    if (!base) throw ConfigError("efficiency baseline method '" + baseline + "' not among entries");
    const double base_ratio = base->critical_dt / base->ms_per_step;

    std::vector<EfficiencyRow> rows;
    for (const auto& e : entries)
        rows.push_back({e.method, e.critical_dt, e.ms_per_step,
                        100.0 * (e.critical_dt / e.ms_per_step) / base_ratio});
    return rows;
}

double time_steps_ms(const RunConfig& cfg, long steps) {
    cfg.validate();
    Simulation sim(initial_state(cfg, 0), cfg.make_box(), cfg.make_params(), cfg.integrator,
                   cfg.dt, RngStream(cfg.seed));
    const auto t0 = std::chrono::steady_clock::now();
    for (long s = 0; s < steps; ++s) sim.step();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / static_cast<double>(steps);
}

namespace {

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: byte-stable newlines
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    return out;
}

}  // namespace

void write_observables_csv(const std::string& path, const std::vector<ObsRow>& rows) {
    auto out = open_csv(path);
    out << "step,time,kinetic_temp,config_temp_num,config_temp_den,potential_energy,px,py,pz\n";
    for (const auto& r : rows)
        out << r.step << ',' << format_g(r.time) << ',' << format_g(r.kinetic_temp) << ','
            << format_g(r.ctemp_num) << ',' << format_g(r.ctemp_den) << ','
            << format_g(r.potential) << ',' << format_g(r.total_momentum.x) << ','
            << format_g(r.total_momentum.y) << ',' << format_g(r.total_momentum.z) << '\n';
}

void write_stress_csv(const std::string& path, const std::vector<ObsRow>& rows) {
    auto out = open_csv(path);
    out << "step,time,sxy\n";
    for (const auto& r : rows)
        out << r.step << ',' << format_g(r.time) << ',' << format_g(r.stress_xy) << '\n';
}

void write_rdf_csv(const std::string& path, const std::vector<RdfHistogram::Row>& rows) {
    auto out = open_csv(path);
    out << "r,g\n";
    for (const auto& r : rows) out << format_g(r.r) << ',' << format_g(r.g) << '\n';
}

void write_sweep_csv(const std::string& path, const SweepResult& sweep) {
    auto out = open_csv(path);
    out << "dt,observable_mean,rel_error,std_err,diverged\n";
    for (const auto& r : sweep.rows) {
        if (r.diverged)
            out << format_g(r.dt) << ",,,,1\n";
        else
            out << format_g(r.dt) << ',' << format_g(r.observable_mean) << ','
                << format_g(r.rel_error) << ',' << format_g(r.std_err) << ",0\n";
    }
}

SweepResult read_sweep_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open sweep file '" + path + "'");
    SweepResult sweep;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty sweep file '" + path + "'");
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        while (fields.size() < 5) fields.emplace_back();
        SweepRow row{};
        row.dt = parse_double("dt", fields[0]);
        row.diverged = trim(fields[4]) == "1";
        if (!row.diverged) {
            row.observable_mean = parse_double("observable_mean", fields[1]);
            row.rel_error = parse_double("rel_error", fields[2]);
            row.std_err = fields[3].empty() ? 0.0 : parse_double("std_err", fields[3]);
        }
        sweep.rows.push_back(row);
    }
    sweep.fitted_slope = std::nan("");
    return sweep;
}

void write_efficiency_csv(const std::string& path, const std::vector<EfficiencyRow>& rows) {
    auto out = open_csv(path);
    out << "method,critical_dt,ms_per_step,scaled_efficiency_pct\n";
    for (const auto& r : rows)
        out << r.method << ',' << format_g(r.critical_dt) << ',' << format_g(r.ms_per_step) << ','
            << format_g(r.scaled_efficiency_pct) << '\n';
}

}  // namespace dpd
