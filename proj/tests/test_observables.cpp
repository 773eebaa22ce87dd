#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dpd/observables.hpp"
#include "dpd/rng.hpp"

using namespace dpd;

TEST_CASE("accumulator mean, variance, sem") {
    Accumulator a;
    for (double x : {2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0}) a.add(x);
    CHECK(a.count() == 8);
    CHECK(a.mean() == doctest::Approx(5.0));
    CHECK(a.variance() == doctest::Approx(4.0));
    CHECK(a.sem() == doctest::Approx(std::sqrt(4.0 / 8.0)));
}

TEST_CASE("merging accumulators equals accumulating everything at once") {
    RngStream rng(1);
    Accumulator whole, left, right;
    for (int k = 0; k < 1000; ++k) {
        const double x = rng.gaussian(0, k);
        whole.add(x);
        (k % 2 ? left : right).add(x);
    }
    left.merge(right);
    CHECK(left.count() == whole.count());
    CHECK(left.mean() == doctest::Approx(whole.mean()).epsilon(1e-14));
    CHECK(left.variance() == doctest::Approx(whole.variance()).epsilon(1e-12));
}

TEST_CASE("kinetic temperature, rest frame and shear frame") {
    SystemState s;
    s.positions = {Vec3{0, 1, 0}, Vec3{0, -1, 0}};
    s.momenta = {Vec3{1, 0, 0}, Vec3{0, 2, 0}};
    s.masses = {1.0, 1.0};
    SimBox box{10.0};
    CHECK(kinetic_temperature(s, box) == doctest::Approx(5.0 / 6.0));

    // With kappa = 1 the streaming velocity at y = +-1 is +-1 in x.
    SimBox sheared{10.0, 1.0, 0.0};
    // Peculiar velocities: (0,0,0) and (1,2,0): sum m|v|^2 = 5.
    CHECK(kinetic_temperature(s, sheared) == doctest::Approx(5.0 / 6.0));
    s.momenta[0] = Vec3{2, 0, 0};  // peculiar (1,0,0): sum = 6
    CHECK(kinetic_temperature(s, sheared) == doctest::Approx(1.0));
}

TEST_CASE("configurational temperature is a ratio of sums and guards zero") {
    ObservableSeries series;
    series.ctemp_num.add(10.0);
    series.ctemp_num.add(30.0);
    series.ctemp_den.add(5.0);
    series.ctemp_den.add(15.0);
    CHECK(series.configurational_temperature() == doctest::Approx(2.0));

    ObservableSeries empty;
    CHECK_THROWS_AS(empty.configurational_temperature(), ConfigError);
    empty.ctemp_num.add(1.0);
    empty.ctemp_den.add(0.0);
    CHECK_THROWS_AS(empty.configurational_temperature(), ConfigError);
}

TEST_CASE("series merge combines replicas") {
    ObservableSeries a, b;
    a.kinetic_temp.add(1.0);
    a.ctemp_num.add(4.0);
    a.ctemp_den.add(2.0);
    b.kinetic_temp.add(3.0);
    b.ctemp_num.add(8.0);
    b.ctemp_den.add(4.0);
    a.merge(b);
    CHECK(a.kinetic_temp.mean() == doctest::Approx(2.0));
    CHECK(a.configurational_temperature() == doctest::Approx(2.0));
}

TEST_CASE("rdf normalization for a single pinned pair") {
    SimBox box{5.0};
    SystemState s;
    s.positions = {Vec3{0, 0, 0}, Vec3{0.35, 0, 0}};
    s.momenta = {Vec3{}, Vec3{}};
    s.masses = {1.0, 1.0};
    RdfHistogram h(0.1, 1.0);
    h.accumulate(s, box);
    const auto rows = h.finalize(2, box);
    REQUIRE(rows.size() == 10);
    const double pi = 3.14159265358979323846;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(rows[k].r == doctest::Approx((k + 0.5) * 0.1));
        if (k == 3)
            CHECK(rows[k].g ==
                  doctest::Approx(125.0 / (4.0 * pi * 0.35 * 0.35 * 0.1)).epsilon(1e-12));
        else
            CHECK(rows[k].g == 0.0);
    }
}

TEST_CASE("rdf of an ideal gas is flat at 1") {
    const double L = 5.0;
    SimBox box{L};
    RngStream rng(9);
    RdfHistogram h(0.1, 2.0);
    for (int snap = 0; snap < 50; ++snap) {
        SystemState s;
        s.positions.resize(200);
        s.momenta.assign(200, Vec3{});
        s.masses.assign(200, 1.0);
        for (int i = 0; i < 200; ++i)
            for (int c = 0; c < 3; ++c)
                s.positions[i][c] = (rng.uniform(snap * 200 + i, c) - 0.5) * L;
        h.accumulate(s, box);
    }
    for (const auto& row : h.finalize(200, box))
        if (row.r > 0.3)  // innermost bins have too few counts to test tightly
            CHECK(row.g == doctest::Approx(1.0).epsilon(0.06));
}

TEST_CASE("rdf range and merge guards") {
    SimBox box{5.0};
    SystemState s;
    s.positions = {Vec3{}, Vec3{1, 0, 0}};
    s.momenta = {Vec3{}, Vec3{}};
    s.masses = {1.0, 1.0};
    RdfHistogram too_wide(0.1, 3.0);
    CHECK_THROWS_AS(too_wide.accumulate(s, box), ConfigError);
    RdfHistogram a(0.1, 1.0), b(0.05, 1.0);
    CHECK_THROWS_AS(a.merge(b), ConfigError);
}

TEST_CASE("stress tensor: ideal-gas kinetic part") {
    SimBox box{2.0};
    SystemState s;
    s.positions = {Vec3{0, 0, 0}, Vec3{0.9, 0, 0}};
    s.momenta = {Vec3{1, 0, 0}, Vec3{0, 2, 0}};
    s.masses = {1.0, 1.0};
    PairList empty;
    const Mat3 sig = stress_tensor(s, empty, box, {});
    CHECK(sig(0, 0) == doctest::Approx(-1.0 / 8.0));
    CHECK(sig(1, 1) == doctest::Approx(-4.0 / 8.0));
    CHECK(sig(2, 2) == 0.0);
    CHECK(sig(0, 1) == 0.0);
}

TEST_CASE("stress tensor: pair virial part") {
    SimBox box{2.0};
    SystemState s;
    s.positions = {Vec3{0.25, 0, 0}, Vec3{-0.25, 0, 0}};
    s.momenta = {Vec3{}, Vec3{}};
    s.masses = {1.0, 1.0};
    PairList list;
    list.pairs = {{0, 1}};
    list.list_cutoff = 1.3;
    list.skin = 0.3;
    list.reference_positions = s.positions;
    const Mat3 sig = stress_tensor(s, list, box, {Vec3{12.5, 0, 0}});
    // r_vec = (0.5, 0, 0), F on i = (12.5, 0, 0): sigma_xx = -(0.5)(12.5)/8.
    CHECK(sig(0, 0) == doctest::Approx(-0.5 * 12.5 / 8.0));
    CHECK(sig(1, 1) == 0.0);
}

TEST_CASE("stress subtracts the streaming velocity in the kinetic term only") {
    SimBox box{2.0, 1.0, 0.0};
    SystemState s;
    s.positions = {Vec3{0, 0.5, 0}, Vec3{0, -0.5, 0}};
    s.momenta = {Vec3{0.5, 0, 0}, Vec3{-0.5, 0, 0}};  // exactly the Couette profile
    s.masses = {1.0, 1.0};
    PairList empty;
    const Mat3 sig = stress_tensor(s, empty, box, {});
    CHECK(sig(0, 0) == doctest::Approx(0.0));
    CHECK(sig(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("viscosity estimate arithmetic and guards") {
    Accumulator sxy;
    sxy.add(2.0);
    sxy.add(4.0);
    const ViscosityEstimate v = viscosity_estimate(sxy, 1.5);
    CHECK(v.eta == doctest::Approx(2.0));
    CHECK(v.std_err == doctest::Approx(std::sqrt(1.0 / 2.0) / 1.5));
    CHECK_THROWS_AS(viscosity_estimate(sxy, 0.0), ConfigError);
    Accumulator none;
    CHECK_THROWS_AS(viscosity_estimate(none, 1.0), ConfigError);
}

TEST_CASE("velocity profile recovers a linear Couette slope") {
    const double L = 4.0;
    VelocityProfile prof(16, L);
    RngStream rng(2);
    SystemState s;
    const int n = 4000;
    s.positions.resize(n);
    s.momenta.resize(n);
    s.masses.assign(n, 1.0);
    for (int i = 0; i < n; ++i) {
        const double y = (rng.uniform(7, i) - 0.5) * L;
        s.positions[i] = Vec3{0, y, 0};
        s.momenta[i] = Vec3{0.3 * y + 0.1, 0, 0};
    }
    prof.accumulate(s);
    CHECK(prof.fitted_slope() == doctest::Approx(0.3).epsilon(1e-3));
}
