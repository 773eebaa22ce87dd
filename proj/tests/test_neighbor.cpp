#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "dpd/errors.hpp"
#include "dpd/neighbor.hpp"
#include "dpd/rng.hpp"

using namespace dpd;

namespace {

SystemState random_state(std::size_t n, double L, std::uint64_t seed) {
    RngStream rng(seed);
    SystemState s;
    s.positions.resize(n);
    s.momenta.assign(n, Vec3{});
    s.masses.assign(n, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (int c = 0; c < 3; ++c)
            s.positions[i][c] = (rng.uniform(RngStream::kInitPosDomain ^ i, c) - 0.5) * L;
    return s;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> brute_pairs(const SystemState& s,
                                                                 const SimBox& box,
                                                                 double cutoff) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    const double c2 = cutoff * cutoff;
    for (std::uint32_t i = 0; i + 1 < s.size(); ++i)
        for (std::uint32_t j = i + 1; j < s.size(); ++j)
            if (norm2(le_minimum_image(s.positions[i], s.positions[j], box).r_vec) < c2)
                out.emplace_back(i, j);
    return out;
}

}  // namespace

TEST_CASE("cell-grid list matches the all-pairs oracle (periodic)") {
    const double L = 7.0;
    SimBox box{L};
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        SystemState s = random_state(200, L, seed);
        const PairList list = build_pair_list(s, box, 1.0, 0.3);
        CHECK(list.pairs == brute_pairs(s, box, 1.3));
    }
}

TEST_CASE("cell-grid list matches the all-pairs oracle under shear") {
    const double L = 7.0;
    // Offsets chosen to hit cell-boundary alignments and generic values.
    for (double offset : {0.0, 0.31, L / 3.0, 2.49, 3.5, L - 1e-9}) {
        SimBox box{L, 1.0, offset};
        SystemState s = random_state(200, L, 11);
        const PairList list = build_pair_list(s, box, 1.0, 0.3);
        CAPTURE(offset);
        CHECK(list.pairs == brute_pairs(s, box, 1.3));
    }
}

TEST_CASE("list is sorted, unique, and i < j") {
    SimBox box{6.0, 0.7, 1.9};
    SystemState s = random_state(150, 6.0, 4);
    const PairList list = build_pair_list(s, box, 1.0, 0.3);
    for (std::size_t k = 0; k < list.size(); ++k) {
        CHECK(list.pairs[k].first < list.pairs[k].second);
        if (k > 0) CHECK(list.pairs[k - 1] < list.pairs[k]);
    }
}

TEST_CASE("all-pairs fallback engages for small boxes") {
    // L = 3.5 with cutoff 1.3: only 2 cells per edge, must fall back.
    SimBox box{3.5};
    SystemState s = random_state(40, 3.5, 9);
    const PairList list = build_pair_list(s, box, 1.0, 0.3);
    CHECK(list.pairs == brute_pairs(s, box, 1.3));
}

TEST_CASE("cutoff larger than half the box is rejected") {
    SimBox box{2.5};
    SystemState s = random_state(10, 2.5, 1);
    CHECK_THROWS_AS(build_pair_list(s, box, 1.0, 0.3), ConfigError);
}

TEST_CASE("rebuild triggers on displacement beyond half the skin") {
    SimBox box{6.0};
    SystemState s = random_state(60, 6.0, 3);
    const PairList list = build_pair_list(s, box, 1.0, 0.3);
    CHECK_FALSE(needs_rebuild(s, list, box));

    SystemState moved = s;
    moved.positions[5].x += 0.10;  // below skin/2 = 0.15
    CHECK_FALSE(needs_rebuild(moved, list, box));
    moved.positions[5].x += 0.10;  // cumulative 0.20 > 0.15
    CHECK(needs_rebuild(moved, list, box));
}

TEST_CASE("displacement is measured with the minimum image") {
    SimBox box{6.0};
    SystemState s = random_state(60, 6.0, 3);
    PairList list = build_pair_list(s, box, 1.0, 0.3);
    // A wrap across the boundary is not a real displacement.
    SystemState wrapped = s;
    wrapped.positions[0].x = wrap_coord(wrapped.positions[0].x + 6.0, 6.0);
    CHECK_FALSE(needs_rebuild(wrapped, list, box));
}

TEST_CASE("offset drift alone eventually forces a rebuild under shear") {
    SimBox box{6.0, 1.0, 0.0};
    SystemState s = random_state(60, 6.0, 8);
    PairList list = build_pair_list(s, box, 1.0, 0.3);
    CHECK_FALSE(needs_rebuild(s, list, box));
    box.le_offset = 0.4;  // drift > skin, positions unchanged
    CHECK(needs_rebuild(s, list, box));
}

TEST_CASE("build is deterministic") {
    SimBox box{6.0, 0.3, 0.77};
    SystemState s = random_state(100, 6.0, 21);
    const PairList a = build_pair_list(s, box, 1.0, 0.3);
    const PairList b = build_pair_list(s, box, 1.0, 0.3);
    CHECK(a.pairs == b.pairs);
}
