#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dpd/box.hpp"
#include "dpd/state.hpp"

namespace dpd {

/// Verlet neighbor list: all pairs (i < j) within r_c + skin at build time,
/// sorted lexicographically, plus the bookkeeping needed to decide when a
/// rebuild is due.
struct PairList {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    double list_cutoff = 0.0;  ///< r_c + skin
    double skin = 0.0;
    std::vector<Vec3> reference_positions;
    double reference_offset = 0.0;  ///< le_offset at build time

    std::size_t size() const { return pairs.size(); }
};

/// Build the pair list with a cell grid (27-neighbor sweep; rows that wrap in
/// y are scanned over all x cells under shear). Falls back to all-pairs when
/// the box holds fewer than 3 cells per edge. Output is deterministic:
/// identical positions give a bit-identical list.
///
/// Throws ConfigError if r_c + skin > L/2.
PairList build_pair_list(const SystemState& state, const SimBox& box, double r_c, double skin);

/// True when the list can no longer guarantee that every pair within r_c is
/// present: some particle moved more than half the skin since the build (the
/// accumulated offset drift under shear eats into the skin budget first).
bool needs_rebuild(const SystemState& state, const PairList& list, const SimBox& box);

}  // namespace dpd
