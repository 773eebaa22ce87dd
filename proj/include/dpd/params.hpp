#pragma once

#include <cmath>

#include "dpd/errors.hpp"

namespace dpd {

/// Pairs closer than this are skipped in all force/thermostat sweeps:
/// the unit vector between overlapping particles is undefined.
inline constexpr double kOverlapGuard = 1e-9;

/// DPD interaction parameters in reduced units (m = r_c = kT = 1 by default).
///
/// The noise strength sigma is never set directly; it is recomputed from
/// sigma^2 = 2*gamma*kT whenever gamma or kT changes, so the
/// fluctuation-dissipation relation cannot be violated.
class DpdParams {
  public:
    DpdParams(double a, double gamma, double kbt, double r_c = 1.0, int dim = 3)
        : a_(a), gamma_(gamma), kbt_(kbt), r_c_(r_c), dim_(dim) {
        if (r_c_ <= 0.0) throw ConfigError("r_c must be > 0");
        if (gamma_ < 0.0) throw ConfigError("gamma must be >= 0");
        if (kbt_ <= 0.0) throw ConfigError("kbt must be > 0");
        if (a_ < 0.0) throw ConfigError("a must be >= 0");
        if (dim_ < 1) throw ConfigError("dim must be >= 1");
        update_sigma();
    }

    double a() const { return a_; }
    double gamma() const { return gamma_; }
    double sigma() const { return sigma_; }
    double kbt() const { return kbt_; }
    double r_c() const { return r_c_; }
    int dim() const { return dim_; }

    void set_a(double a) {
        if (a < 0.0) throw ConfigError("a must be >= 0");
        a_ = a;
    }
    void set_gamma(double gamma) {
        if (gamma < 0.0) throw ConfigError("gamma must be >= 0");
        gamma_ = gamma;
        update_sigma();
    }
    void set_kbt(double kbt) {
        if (kbt <= 0.0) throw ConfigError("kbt must be > 0");
        kbt_ = kbt;
        update_sigma();
    }

  private:
    void update_sigma() { sigma_ = std::sqrt(2.0 * gamma_ * kbt_); }

    double a_;
    double gamma_;
    double kbt_;
    double r_c_;
    int dim_;
    double sigma_ = 0.0;
};

/// Closed-form estimate of the Schmidt number of the standard DPD fluid,
/// Sc = 1/2 + (2*pi*gamma*rho*r_c^4)^2 / (70875 kT).
inline double schmidt_number_estimate(double gamma, double rho_d, const DpdParams& p) {
    const double pi = 3.14159265358979323846;
    const double rc4 = p.r_c() * p.r_c() * p.r_c() * p.r_c();
    const double t = 2.0 * pi * gamma * rho_d * rc4;
    return 0.5 + t * t / (70875.0 * p.kbt());
}

}  // namespace dpd
