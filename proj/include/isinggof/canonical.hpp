#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "isinggof/lattice.hpp"

namespace isinggof {

/// A rectangular configuration: one connected component made of an n x m
/// block B (m rows, n columns as realized), a strip of d1 cells along one of
/// the shorter sides of B, d2 in {0,1} extra cells on a longer side, plus s
/// isolated singletons. d1 = 0 and s = 0 are admitted: the closed-form
/// maximizer below needs the degenerate values, and the corner-break shape
/// (n, m, m-1, 1, s) with n = m-1 may have n < m.
struct RectangularSpec {
    std::int64_t n = 1;
    std::int64_t m = 1;
    std::int64_t d1 = 0;
    std::int64_t d2 = 0;
    std::int64_t s = 0;

    void validate() const;

    /// Size of the single non-singleton component (may be 1 when the shape
    /// degenerates to a lone cell).
    std::int64_t component_size() const { return n * m + d1 + d2; }

    /// Number of singletons in the realized configuration; counts the main
    /// component too when it degenerates to a single cell.
    std::int64_t singleton_count() const { return s + (component_size() == 1 ? 1 : 0); }

    bool operator==(const RectangularSpec&) const = default;
};

/// Closed-form sufficient statistics of a rectangular configuration placed
/// in the interior of an ample lattice:
///   T1 = n*m + d1 + d2 + s,
///   T2 = 2*(n + m + [d1>0] + d2 + 2*s).
std::pair<std::int64_t, std::int64_t> rect_stats(const RectangularSpec& spec);

/// Builds the rectangular configuration on a 2D lattice with the block's
/// top-left corner at `anchor`. Everything is placed strictly inside the
/// interior; singletons go to raster-scan order interior sites at Chebyshev
/// distance >= 2 from all occupied cells. Throws DoesNotFitError if the
/// lattice is too small.
Configuration realize_rect(const RectangularSpec& spec, const LatticeShape& shape,
                           std::int64_t anchor);

/// The unique (up to location) 1D fiber element maximizing singletons:
/// b/2 - 1 singletons and one component of size a - b/2 + 1.
struct MaxSingleton1D {
    std::int64_t singletons = 0;
    std::int64_t component_size = 0;

    bool operator==(const MaxSingleton1D&) const = default;
};

MaxSingleton1D max_singleton_1d(FiberId fiber);

/// The unique (up to location) 2D max-singleton shape for a feasible fiber,
/// via the closed-form solution of the constrained edge-maximization
/// problem. Square roots go through integer isqrt so perfect squares do not
/// suffer floating-point off-by-one.
RectangularSpec max_singleton_2d(FiberId fiber);

/// Whether S(a, b) is non-empty on an ample zero-boundary lattice of the
/// given dimension (d in {1, 2}). In 2D the lower bound on b comes from the
/// maximal edge count floor(2a - 2*sqrt(a)) of a-cell grid subgraphs.
bool fiber_feasible(FiberId fiber, int d);

/// floor(sqrt(x)) for x >= 0, exact.
std::int64_t isqrt64(std::int64_t x);

/// A simple swap: turn on_site on and off_site off.
struct SiteSwap {
    std::int64_t on = 0;
    std::int64_t off = 0;

    bool operator==(const SiteSwap&) const = default;
};

/// The canonical 1D max-singleton configuration on a zero-clamped path:
/// the big component starts at the first interior site, singletons follow
/// at gap-2 slots. Throws DoesNotFitError when the path is too short.
Configuration canonical_max_singleton_1d(FiberId fiber, const LatticeShape& shape);

/// Swap sequence carrying a 1D zero-clamped configuration to the canonical
/// max-singleton configuration of its fiber. Every intermediate state stays
/// in S(a, b): each swap preserves the component count, hence T2. Returns
/// an empty list when the input is already canonical.
std::vector<SiteSwap> normalize_1d(const Configuration& config);

} // namespace isinggof
