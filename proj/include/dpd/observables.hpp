#pragma once

#include <cstdint>
#include <vector>

#include "dpd/box.hpp"
#include "dpd/errors.hpp"
#include "dpd/forces.hpp"
#include "dpd/neighbor.hpp"
#include "dpd/params.hpp"
#include "dpd/state.hpp"

namespace dpd {

/// Streaming mean/variance accumulator. Merging two accumulators built from
/// disjoint sample sets equals accumulating all samples in one.
class Accumulator {
  public:
    void add(double x) {
        ++n_;
        sum_ += x;
        sum_sq_ += x * x;
    }
    void merge(const Accumulator& o) {
        n_ += o.n_;
        sum_ += o.sum_;
        sum_sq_ += o.sum_sq_;
    }
    long count() const { return n_; }
    double sum() const { return sum_; }
    double mean() const { return sum_ / static_cast<double>(n_); }
    double variance() const {
        const double m = mean();
        return sum_sq_ / static_cast<double>(n_) - m * m;
    }
    double sem() const {
        if (n_ < 2) return 0.0;
        double v = variance();
        if (v < 0.0) v = 0.0;
        return std::sqrt(v / static_cast<double>(n_));
    }

  private:
    long n_ = 0;
    double sum_ = 0.0;
    double sum_sq_ = 0.0;
};

/// Per-quantity accumulators for one run (post-equilibration samples only;
/// the caller enforces the discard cadence).
struct ObservableSeries {
    double equilibration_fraction = 0.2;
    Accumulator kinetic_temp;
    Accumulator ctemp_num;  ///< sum_i |grad_i U|^2 samples
    Accumulator ctemp_den;  ///< sum_i lap_i U samples
    Accumulator potential;
    Accumulator stress_xy;

    void merge(const ObservableSeries& o) {
        kinetic_temp.merge(o.kinetic_temp);
        ctemp_num.merge(o.ctemp_num);
        ctemp_den.merge(o.ctemp_den);
        potential.merge(o.potential);
        stress_xy.merge(o.stress_xy);
    }

    /// Ratio-of-averages configurational temperature estimate.
    /// Throws ConfigError when the accumulated Laplacian is zero (ideal gas).
    double configurational_temperature() const {
        if (ctemp_den.count() == 0 || ctemp_den.sum() == 0.0)
            throw ConfigError("configurational temperature undefined: zero accumulated Laplacian");
        return ctemp_num.sum() / ctemp_den.sum();
    }
};

/// Instantaneous kinetic temperature sum_i m |v_i - u(q_i)|^2 / (d N), with
/// the streaming velocity subtracted under shear.
double kinetic_temperature(const SystemState& state, const SimBox& box, int dim = 3);

/// Accumulate one configurational-temperature sample (numerator and
/// denominator kept separate; the estimate is a ratio of time averages).
void configurational_temperature_accumulate(const SystemState& state, const PairList& pairs,
                                            const SimBox& box, const DpdParams& params,
                                            ObservableSeries& series);

/// Radial distribution function histogram with standard shell normalization.
class RdfHistogram {
  public:
    RdfHistogram() = default;
    RdfHistogram(double bin_width, double max_r);

    /// Bin all pair separations of one snapshot (O(N^2) minimum-image loop).
    void accumulate(const SystemState& state, const SimBox& box);
    void merge(const RdfHistogram& o);

    struct Row {
        double r;  ///< bin center
        double g;
    };
    std::vector<Row> finalize(std::size_t n_particles, const SimBox& box) const;

    double bin_width() const { return bin_width_; }
    double max_r() const { return max_r_; }
    long snapshots() const { return snapshots_; }

  private:
    double bin_width_ = 0.01;
    double max_r_ = 0.0;
    std::vector<std::uint64_t> counts_;
    long snapshots_ = 0;
};

/// Irving-Kirkwood stress tensor from explicit per-pair total forces
/// (aligned with the pair list; force on i, conservative + dissipative +
/// realized random impulse / dt). The streaming velocity is subtracted in the
/// kinetic term only.
Mat3 stress_tensor(const SystemState& state, const PairList& pairs, const SimBox& box,
                   const std::vector<Vec3>& pair_forces_total);

struct ViscosityEstimate {
    double eta;
    double std_err;
};

/// eta = <sigma_xy> / kappa over post-equilibration samples.
/// Throws ConfigError when kappa == 0 or no samples were collected.
ViscosityEstimate viscosity_estimate(const Accumulator& stress_xy, double kappa);

/// Binned mean x-velocity vs y, for checking the Couette profile.
class VelocityProfile {
  public:
    VelocityProfile() = default;
    VelocityProfile(int bins, double box_edge);

    void accumulate(const SystemState& state);
    void merge(const VelocityProfile& o);

    struct Bin {
        double y;  ///< bin center
        double mean_vx;
    };
    std::vector<Bin> bins() const;

    /// Least-squares slope of mean vx against y.
    double fitted_slope() const;

  private:
    double edge_ = 0.0;
    std::vector<double> sum_vx_;
    std::vector<long> count_;
};

}  // namespace dpd
