#pragma once

// Shared fixtures and independent reference oracles for the test suites.
// Everything here is deliberately brute force: these are the values the
// implementation is checked against, so they must not share code paths
// with it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "isinggof/lattice.hpp"

namespace testsupport {

/// The 5x5 example configuration used throughout: ones at (row, col)
/// (1,1),(2,1),(3,1),(2,2),(1,3),(3,3) (0-based), i.e. the column-wise
/// vector 00000 01110 00100 01010 00000.
inline isinggof::Configuration example_5x5(
    isinggof::BoundaryMode boundary = isinggof::BoundaryMode::free) {
    isinggof::LatticeShape shape({5, 5}, boundary);
    return isinggof::Configuration::from_occupied(shape, {6, 7, 8, 12, 16, 18});
}

/// A 2x2 block with its top-left corner at (row, col) on an R x C lattice.
inline isinggof::Configuration block_2x2(std::int64_t rows, std::int64_t cols, std::int64_t r,
                                         std::int64_t c,
                                         isinggof::BoundaryMode boundary =
                                             isinggof::BoundaryMode::free) {
    isinggof::LatticeShape shape({rows, cols}, boundary);
    const auto site = [&](std::int64_t rr, std::int64_t cc) { return rr + cc * rows; };
    return isinggof::Configuration::from_occupied(
        shape, {site(r, c), site(r + 1, c), site(r, c + 1), site(r + 1, c + 1)});
}

/// --- Polyomino-multiset oracle for zero-boundary 2D fibers ---
///
/// On an ample zero-clamped lattice every configuration is a disjoint union
/// of well-separated connected pieces, and T2 is the sum of the pieces'
/// perimeters (4*size - 2*edges). So the achievable (T1, T2, #singletons)
/// triples are exactly the multiset combinations of connected polyominoes.

using Cells = std::vector<std::pair<int, int>>;

inline Cells canonical_translate(Cells cells) {
    int min_r = cells.front().first;
    int min_c = cells.front().second;
    for (const auto& [r, c] : cells) {
        min_r = std::min(min_r, r);
        min_c = std::min(min_c, c);
    }
    for (auto& [r, c] : cells) {
        r -= min_r;
        c -= min_c;
    }
    std::sort(cells.begin(), cells.end());
    return cells;
}

inline int polyomino_t2(const Cells& cells) {
    std::set<std::pair<int, int>> occ(cells.begin(), cells.end());
    int edges = 0;
    for (const auto& [r, c] : cells) {
        if (occ.count({r + 1, c})) ++edges;
        if (occ.count({r, c + 1})) ++edges;
    }
    return 4 * static_cast<int>(cells.size()) - 2 * edges;
}

/// piece_t2[k] = set of T2 values realized by connected polyominoes of size
/// k, for k = 1..max_size (index 0 unused).
inline std::vector<std::set<int>> polyomino_t2_by_size(int max_size) {
    std::vector<std::set<Cells>> by_size(static_cast<std::size_t>(max_size + 1));
    by_size[1].insert({{0, 0}});
    for (int k = 1; k < max_size; ++k) {
        for (const auto& poly : by_size[static_cast<std::size_t>(k)]) {
            std::set<std::pair<int, int>> occ(poly.begin(), poly.end());
            for (const auto& [r, c] : poly) {
                for (const auto& [dr, dc] :
                     {std::pair{1, 0}, std::pair{-1, 0}, std::pair{0, 1}, std::pair{0, -1}}) {
                    const std::pair<int, int> cand{r + dr, c + dc};
                    if (occ.count(cand)) continue;
                    Cells grown = poly;
                    grown.push_back(cand);
                    by_size[static_cast<std::size_t>(k + 1)].insert(canonical_translate(grown));
                }
            }
        }
    }
    std::vector<std::set<int>> t2s(static_cast<std::size_t>(max_size + 1));
    for (int k = 1; k <= max_size; ++k) {
        for (const auto& poly : by_size[static_cast<std::size_t>(k)]) {
            t2s[static_cast<std::size_t>(k)].insert(polyomino_t2(poly));
        }
    }
    return t2s;
}

/// Maximum singleton count over all multisets of polyomino pieces with
/// total size a and total perimeter b; -1 when (a, b) is unachievable.
inline int max_singletons_oracle(int a, int b, const std::vector<std::set<int>>& piece_t2) {
    const int max_b = 4 * a;
    if (b < 0 || b > max_b) return -1;
    std::vector<std::vector<int>> best(static_cast<std::size_t>(a + 1),
                                       std::vector<int>(static_cast<std::size_t>(max_b + 1), -1));
    best[0][0] = 0;
    for (int ca = 0; ca < a; ++ca) {
        for (int cb = 0; cb <= max_b; ++cb) {
            if (best[static_cast<std::size_t>(ca)][static_cast<std::size_t>(cb)] < 0) continue;
            const int cur = best[static_cast<std::size_t>(ca)][static_cast<std::size_t>(cb)];
            const int max_k = std::min(static_cast<int>(piece_t2.size()) - 1, a - ca);
            for (int k = 1; k <= max_k; ++k) {
                for (int t : piece_t2[static_cast<std::size_t>(k)]) {
                    if (cb + t > max_b) continue;
                    int& slot = best[static_cast<std::size_t>(ca + k)]
                                    [static_cast<std::size_t>(cb + t)];
                    slot = std::max(slot, cur + (k == 1 ? 1 : 0));
                }
            }
        }
    }
    return best[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
}

/// --- Kolmogorov-Smirnov test against U(0,1) ---

inline double ks_statistic_uniform(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(values[i] - lo, hi - values[i]));
    }
    return d;
}

/// Asymptotic Kolmogorov tail probability of the KS statistic.
inline double ks_pvalue(double d, std::size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = 2.0 * ((j % 2 == 1) ? 1.0 : -1.0) *
                            std::exp(-2.0 * lambda * lambda * j * j);
        sum += term;
        if (std::fabs(term) < 1e-12) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

} // namespace testsupport
