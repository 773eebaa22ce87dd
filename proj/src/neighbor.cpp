#include "dpd/neighbor.hpp"

#include <algorithm>
#include <cmath>

#include "dpd/errors.hpp"

namespace dpd {

namespace {

int wrap_cell(int c, int n) {
    c %= n;
    return c < 0 ? c + n : c;
}

PairList all_pairs_fallback(const SystemState& state, const SimBox& box, double cutoff) {
    PairList list;
    const double cut2 = cutoff * cutoff;
    const std::uint32_t n = static_cast<std::uint32_t>(state.size());
    for (std::uint32_t i = 0; i + 1 < n; ++i) {
        for (std::uint32_t j = i + 1; j < n; ++j) {
            const auto sep = le_minimum_image(state.positions[i], state.positions[j], box);
            if (norm2(sep.r_vec) < cut2) list.pairs.emplace_back(i, j);
        }
    }
    return list;
}

}  // namespace

PairList build_pair_list(const SystemState& state, const SimBox& box, double r_c, double skin) {
    const double cutoff = r_c + skin;
    const double L = box.edge;
    if (cutoff > 0.5 * L)
        throw ConfigError("pair list cutoff r_c + skin exceeds half the box edge");

    const int nc = static_cast<int>(std::floor(L / cutoff));
    PairList list;
    if (nc < 3) {
        list = all_pairs_fallback(state, box, cutoff);
    } else {
        const double cell_edge = L / nc;
        const std::uint32_t n = static_cast<std::uint32_t>(state.size());
        const bool sheared = box.shear_rate != 0.0 || box.le_offset != 0.0;

        // Bin particles into cells. Positions are inside the primary box
        // [-L/2, L/2), so indices land in [0, nc).
        auto cell_of = [&](const Vec3& q) {
            int ix = static_cast<int>((q.x + 0.5 * L) / cell_edge);
            int iy = static_cast<int>((q.y + 0.5 * L) / cell_edge);
            int iz = static_cast<int>((q.z + 0.5 * L) / cell_edge);
            ix = std::min(ix, nc - 1);
            iy = std::min(iy, nc - 1);
            iz = std::min(iz, nc - 1);
            return (iz * nc + iy) * nc + ix;
        };

        std::vector<std::vector<std::uint32_t>> cells(static_cast<std::size_t>(nc) * nc * nc);
        std::vector<int> cx(n), cy(n), cz(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            const Vec3& q = state.positions[i];
            const int c = cell_of(q);
            cells[c].push_back(i);
            cx[i] = c % nc;
            cy[i] = (c / nc) % nc;
            cz[i] = c / (nc * nc);
        }

        const double cut2 = cutoff * cutoff;
        std::vector<std::uint32_t> candidates;
        for (std::uint32_t i = 0; i < n; ++i) {
            for (int dz = -1; dz <= 1; ++dz) {
                const int iz = wrap_cell(cz[i] + dz, nc);
                for (int dy = -1; dy <= 1; ++dy) {
                    const int iyr = cy[i] + dy;
                    const bool ywrap = iyr < 0 || iyr >= nc;
                    const int iy = wrap_cell(iyr, nc);
                    // Under shear the wrapped y row is displaced by the
                    // offset in x, so any x cell of that row may hold a
                    // neighbor; scan the whole row.
                    const int dx_lo = (ywrap && sheared) ? 0 : cx[i] - 1;
                    const int dx_hi = (ywrap && sheared) ? nc - 1 : cx[i] + 1;
                    for (int ixr = dx_lo; ixr <= dx_hi; ++ixr) {
                        const int ix = wrap_cell(ixr, nc);
                        for (std::uint32_t j : cells[(static_cast<std::size_t>(iz) * nc + iy) * nc + ix]) {
                            if (j <= i) continue;
                            const auto sep =
                                le_minimum_image(state.positions[i], state.positions[j], box);
                            if (norm2(sep.r_vec) < cut2) list.pairs.emplace_back(i, j);
                        }
                    }
                }
            }
        }
    }

    std::sort(list.pairs.begin(), list.pairs.end());
    list.pairs.erase(std::unique(list.pairs.begin(), list.pairs.end()), list.pairs.end());
    list.list_cutoff = cutoff;
    list.skin = skin;
    list.reference_positions = state.positions;
    list.reference_offset = box.le_offset;
    return list;
}

bool needs_rebuild(const SystemState& state, const PairList& list, const SimBox& box) {
    // Offset drift shifts boundary images in x even for static particles, so
    // it consumes skin budget directly.
    double doff = std::fabs(box.le_offset - list.reference_offset);
    doff = std::min(doff, box.edge - doff);
    const double budget = list.skin - doff;
    if (budget <= 0.0) return true;
    const double thresh2 = 0.25 * budget * budget;

    for (std::size_t i = 0; i < state.size(); ++i) {
        const Vec3 d = minimum_image(state.positions[i] - list.reference_positions[i], box);
        if (norm2(d) > thresh2) return true;
    }
    return false;
}

}  // namespace dpd
