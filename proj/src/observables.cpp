#include "dpd/observables.hpp"

#include <cmath>

namespace dpd {

double kinetic_temperature(const SystemState& state, const SimBox& box, int dim) {
    const bool sheared = box.shear_rate != 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        Vec3 v = state.velocity(i);
        if (sheared) v -= streaming_velocity(state.positions[i], box);
        acc += state.masses[i] * norm2(v);
    }
    return acc / (dim * static_cast<double>(state.size()));
}

void configurational_temperature_accumulate(const SystemState& state, const PairList& pairs,
                                            const SimBox& box, const DpdParams& params,
                                            ObservableSeries& series) {
    const ConfigSample s = measure_configurational(state, pairs, box, params);
    series.ctemp_num.add(s.grad_sq);
    series.ctemp_den.add(s.laplacian);
    series.potential.add(s.potential);
}

RdfHistogram::RdfHistogram(double bin_width, double max_r) : bin_width_(bin_width), max_r_(max_r) {
    if (bin_width_ <= 0.0 || max_r_ <= 0.0) throw ConfigError("rdf: bin width and max_r must be > 0");
    counts_.assign(static_cast<std::size_t>(std::ceil(max_r_ / bin_width_)), 0);
}

void RdfHistogram::accumulate(const SystemState& state, const SimBox& box) {
    if (max_r_ > 0.5 * box.edge) throw ConfigError("rdf: max_r exceeds half the box edge");
    const double max2 = max_r_ * max_r_;
    const std::size_t n = state.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto sep = le_minimum_image(state.positions[i], state.positions[j], box);
            const double r2 = norm2(sep.r_vec);
            if (r2 >= max2) continue;
            const auto bin = static_cast<std::size_t>(std::sqrt(r2) / bin_width_);
            if (bin < counts_.size()) ++counts_[bin];
        }
    }
    ++snapshots_;
}

void RdfHistogram::merge(const RdfHistogram& o) {
    if (o.counts_.size() != counts_.size() || o.bin_width_ != bin_width_)
        throw ConfigError("rdf: cannot merge histograms with different binning");
    for (std::size_t k = 0; k < counts_.size(); ++k) counts_[k] += o.counts_[k];
    snapshots_ += o.snapshots_;
}

std::vector<RdfHistogram::Row> RdfHistogram::finalize(std::size_t n_particles,
                                                      const SimBox& box) const {
    const double pi = 3.14159265358979323846;
    const double n_pairs = 0.5 * static_cast<double>(n_particles) * (n_particles - 1);
    std::vector<Row> rows;
    rows.reserve(counts_.size());
    for (std::size_t k = 0; k < counts_.size(); ++k) {
        const double r = (k + 0.5) * bin_width_;
        const double shell = 4.0 * pi * r * r * bin_width_;
        const double g = static_cast<double>(counts_[k]) * box.volume() /
                         (n_pairs * static_cast<double>(snapshots_) * shell);
        rows.push_back({r, g});
    }
    return rows;
}

Mat3 stress_tensor(const SystemState& state, const PairList& pairs, const SimBox& box,
                   const std::vector<Vec3>& pair_forces_total) {
    Mat3 acc;
    const bool sheared = box.shear_rate != 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        Vec3 v = state.velocity(i);
        if (sheared) v -= streaming_velocity(state.positions[i], box);
        add_outer(acc, state.masses[i] * v, v);
    }
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [i, j] = pairs.pairs[k];
        const auto sep = le_minimum_image(state.positions[i], state.positions[j], box);
        add_outer(acc, sep.r_vec, pair_forces_total[k]);
    }
    acc *= -1.0 / box.volume();
    return acc;
}

ViscosityEstimate viscosity_estimate(const Accumulator& stress_xy, double kappa) {
    if (kappa == 0.0) throw ConfigError("viscosity requires a nonzero shear rate");
    if (stress_xy.count() < 1) throw ConfigError("viscosity requires at least one stress sample");
    return {stress_xy.mean() / kappa, stress_xy.sem() / std::fabs(kappa)};
}

VelocityProfile::VelocityProfile(int bins, double box_edge) : edge_(box_edge) {
    if (bins < 2) throw ConfigError("velocity profile needs at least 2 bins");
    sum_vx_.assign(bins, 0.0);
    count_.assign(bins, 0);
}

void VelocityProfile::accumulate(const SystemState& state) {
    const int nb = static_cast<int>(count_.size());
    for (std::size_t i = 0; i < state.size(); ++i) {
        int b = static_cast<int>((state.positions[i].y / edge_ + 0.5) * nb);
        if (b < 0) b = 0;
        if (b >= nb) b = nb - 1;
        sum_vx_[b] += state.velocity(i).x;
        ++count_[b];
    }
}

void VelocityProfile::merge(const VelocityProfile& o) {
    for (std::size_t b = 0; b < count_.size(); ++b) {
        sum_vx_[b] += o.sum_vx_[b];
        count_[b] += o.count_[b];
    }
}

std::vector<VelocityProfile::Bin> VelocityProfile::bins() const {
    std::vector<Bin> out;
    const int nb = static_cast<int>(count_.size());
    for (int b = 0; b < nb; ++b) {
        if (count_[b] == 0) continue;
        const double y = (static_cast<double>(b) + 0.5) / nb * edge_ - 0.5 * edge_;
        out.push_back({y, sum_vx_[b] / static_cast<double>(count_[b])});
    }
    return out;
}

double VelocityProfile::fitted_slope() const {
    const auto pts = bins();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(pts.size());
    for (const auto& p : pts) {
        sx += p.y;
        sy += p.mean_vx;
        sxx += p.y * p.y;
        sxy += p.y * p.mean_vx;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace dpd
