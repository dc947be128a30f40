#include "isinggof/canonical.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

namespace isinggof {

std::int64_t isqrt64(std::int64_t x) {
    if (x < 0) throw ValidationError("isqrt64 of a negative number");
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(x)));
    while (r > 0 && r * r > x) --r;
    while ((r + 1) * (r + 1) <= x) ++r;
    return r;
}

void RectangularSpec::validate() const {
    if (n < 1 || m < 1) throw ValidationError("rectangular spec: block sides must be >= 1");
    if (d2 != 0 && d2 != 1) throw ValidationError("rectangular spec: d2 must be 0 or 1");
    if (d1 < 0 || s < 0) throw ValidationError("rectangular spec: d1 and s must be >= 0");
    // The d1 strip lies along a shorter side of the block; the corner-break
    // shape (m-1, m, m-1, 1, s) makes the bounds d1 < m and d1 <= n.
    if (d1 > 0 && !(d1 < m && d1 <= n)) {
        throw ValidationError("rectangular spec: d1 must satisfy d1 < m and d1 <= n");
    }
}

std::pair<std::int64_t, std::int64_t> rect_stats(const RectangularSpec& spec) {
    spec.validate();
    const std::int64_t delta_d1 = spec.d1 > 0 ? 1 : 0;
    const std::int64_t t1 = spec.n * spec.m + spec.d1 + spec.d2 + spec.s;
    const std::int64_t t2 = 2 * (spec.n + spec.m + delta_d1 + spec.d2 + 2 * spec.s);
    return {t1, t2};
}

namespace {

std::int64_t chebyshev(std::int64_t r1, std::int64_t c1, std::int64_t r2, std::int64_t c2) {
    return std::max<std::int64_t>(r1 > r2 ? r1 - r2 : r2 - r1, c1 > c2 ? c1 - c2 : c2 - c1);
}

} // namespace

Configuration realize_rect(const RectangularSpec& spec, const LatticeShape& shape,
                           std::int64_t anchor) {
    spec.validate();
    if (shape.dims.size() != 2) {
        throw ValidationError("realize_rect needs a 2D lattice");
    }
    const std::int64_t rows = shape.dims[0];
    const std::int64_t cols = shape.dims[1];
    if (anchor < 0 || anchor >= shape.vertex_count()) {
        throw DoesNotFitError("anchor outside the lattice");
    }
    const auto anchor_coords = shape.coords_of(anchor);
    const std::int64_t r0 = anchor_coords[0];
    const std::int64_t c0 = anchor_coords[1];

    std::vector<std::pair<std::int64_t, std::int64_t>> occupied;
    // Block of m rows by n columns.
    for (std::int64_t r = 0; r < spec.m; ++r) {
        for (std::int64_t c = 0; c < spec.n; ++c) {
            occupied.emplace_back(r0 + r, c0 + c);
        }
    }
    // d1 strip along a shorter side, d2 cell on a longer side (far corner,
    // so the two decorations never touch).
    if (spec.m <= spec.n) {
        for (std::int64_t r = 0; r < spec.d1; ++r) occupied.emplace_back(r0 + r, c0 + spec.n);
        if (spec.d2) occupied.emplace_back(r0 + spec.m, c0);
    } else {
        for (std::int64_t c = 0; c < spec.d1; ++c) occupied.emplace_back(r0 + spec.m, c0 + c);
        if (spec.d2) occupied.emplace_back(r0, c0 + spec.n);
    }

    auto interior = [&](std::int64_t r, std::int64_t c) {
        return r >= 1 && r <= rows - 2 && c >= 1 && c <= cols - 2;
    };
    for (const auto& [r, c] : occupied) {
        if (!interior(r, c)) {
            throw DoesNotFitError("rectangular configuration does not fit in the lattice interior");
        }
    }

    // Singletons: deterministic raster scan over interior sites, keeping
    // Chebyshev distance >= 2 from everything placed so far.
    std::int64_t placed = 0;
    for (std::int64_t r = 1; r <= rows - 2 && placed < spec.s; ++r) {
        for (std::int64_t c = 1; c <= cols - 2 && placed < spec.s; ++c) {
            bool ok = true;
            for (const auto& [ro, co] : occupied) {
                if (chebyshev(r, c, ro, co) < 2) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                occupied.emplace_back(r, c);
                ++placed;
            }
        }
    }
    if (placed < spec.s) {
        throw DoesNotFitError("not enough interior room for the singletons");
    }

    std::vector<std::int64_t> sites;
    sites.reserve(occupied.size());
    for (const auto& [r, c] : occupied) sites.push_back(shape.index_of({r, c}));
    return Configuration::from_occupied(shape, sites);
}

MaxSingleton1D max_singleton_1d(FiberId fiber) {
    if (!fiber_feasible(fiber, 1)) {
        throw InfeasibleFiberError("no 1D configuration has T1=" + std::to_string(fiber.a) +
                                   ", T2=" + std::to_string(fiber.b));
    }
    return {fiber.b / 2 - 1, fiber.a - fiber.b / 2 + 1};
}

RectangularSpec max_singleton_2d(FiberId fiber) {
    if (!fiber_feasible(fiber, 2)) {
        throw InfeasibleFiberError("no 2D configuration has T1=" + std::to_string(fiber.a) +
                                   ", T2=" + std::to_string(fiber.b));
    }
    const std::int64_t a = fiber.a;
    const std::int64_t b = fiber.b;

    // s = floor((b/2 - 1 - sqrt(4a - b + 1)) / 2), with the square root
    // separated into the exact and irrational cases so no floating point
    // enters the floor.
    const std::int64_t disc = 4 * a - b + 1;
    const std::int64_t q = isqrt64(disc);
    const std::int64_t x = b / 2 - 1;
    std::int64_t s;
    if (q * q == disc) {
        s = (x - q) / 2 - ((x - q) % 2 < 0 ? 1 : 0);
    } else {
        // sqrt(disc) lies strictly between q and q+1.
        s = (x - q - 1) / 2 - ((x - q - 1) % 2 < 0 ? 1 : 0);
    }
    if (s < 0) {
        throw InfeasibleFiberError("max-singleton formula produced s < 0; fiber out of range");
    }

    const std::int64_t rest = a - s;
    const std::int64_t m = isqrt64(rest);
    const std::int64_t r = rest / m;
    const std::int64_t residual = b - 4 * s - 2 * (m + r);
    if (residual != 0 && residual != 2) {
        throw InfeasibleFiberError("max-singleton residual is not 0 or 2; fiber out of range");
    }
    const bool integral = rest % m == 0;
    const std::int64_t n = (integral && residual == 2) ? r - 1 : r;

    RectangularSpec spec;
    spec.m = m;
    spec.n = n;
    spec.s = s;
    if (residual == 0) {
        spec.d1 = rest - m * n;
        spec.d2 = 0;
    } else {
        spec.d1 = rest - m * n - 1;
        spec.d2 = 1;
    }
    spec.validate();
    return spec;
}

bool fiber_feasible(FiberId fiber, int d) {
    if (d != 1 && d != 2) throw ValidationError("fiber_feasible supports d in {1, 2}");
    if (fiber.a < 0 || fiber.b < 0) return false;
    if (fiber.a == 0) return fiber.b == 0;
    if (fiber.b % 2 != 0) return false;
    if (d == 1) return fiber.b >= 2 && fiber.b <= 2 * fiber.a;

    // Max edges of an induced grid subgraph on a cells: floor(2a - 2*sqrt(a)).
    const std::int64_t t = isqrt64(4 * fiber.a);
    const std::int64_t ceil_2sqrt = (t * t == 4 * fiber.a) ? t : t + 1;
    const std::int64_t max_edges = 2 * fiber.a - ceil_2sqrt;
    const std::int64_t b_min = 4 * fiber.a - 2 * max_edges;
    return fiber.b >= b_min && fiber.b <= 4 * fiber.a;
}

namespace {

struct Run {
    std::int64_t left;
    std::int64_t right; // inclusive
    std::int64_t size() const { return right - left + 1; }
};

std::vector<Run> scan_runs(const std::vector<std::uint8_t>& cells) {
    std::vector<Run> runs;
    const auto n = static_cast<std::int64_t>(cells.size());
    std::int64_t p = 0;
    while (p < n) {
        if (!cells[static_cast<std::size_t>(p)]) {
            ++p;
            continue;
        }
        std::int64_t l = p;
        while (p < n && cells[static_cast<std::size_t>(p)]) ++p;
        runs.push_back({l, p - 1});
    }
    return runs;
}

/// Path normalization working state: a flat cell array plus the emitted
/// swap list. Every move we make carries a cell strictly to the left while
/// preserving the component count (hence T2), so the total of the occupied
/// positions is a strictly decreasing potential and termination is
/// structural.
struct PathRewriter {
    std::vector<std::uint8_t> cells;
    std::vector<SiteSwap> swaps;
    std::int64_t guard = 0;
    std::int64_t guard_limit = 0;

    void swap(std::int64_t on, std::int64_t off) {
        assert(on < off);
        assert(cells[static_cast<std::size_t>(on)] == 0);
        assert(cells[static_cast<std::size_t>(off)] == 1);
        cells[static_cast<std::size_t>(on)] = 1;
        cells[static_cast<std::size_t>(off)] = 0;
        swaps.push_back({on, off});
        if (++guard > guard_limit) {
            throw std::logic_error("normalize_1d failed to terminate");
        }
    }
};

} // namespace

Configuration canonical_max_singleton_1d(FiberId fiber, const LatticeShape& shape) {
    if (shape.effective_dim() != 1) throw ValidationError("canonical 1D shape needs a path lattice");
    if (shape.boundary != BoundaryMode::zero_clamped) {
        throw ValidationError("canonical 1D configurations are defined on zero-clamped paths");
    }
    const std::int64_t nv = shape.vertex_count();
    std::vector<std::int64_t> sites;
    if (fiber.a > 0) {
        const MaxSingleton1D opt = max_singleton_1d(fiber);
        const std::int64_t big = opt.component_size;
        const std::int64_t last = 1 + (big - 1) + 2 * opt.singletons;
        if (last > nv - 2) throw DoesNotFitError("path too short for the canonical configuration");
        for (std::int64_t p = 1; p <= big; ++p) sites.push_back(p);
        for (std::int64_t i = 1; i <= opt.singletons; ++i) sites.push_back(big + 2 * i);
    } else if (fiber.b != 0) {
        throw InfeasibleFiberError("empty fiber must have b = 0");
    }
    return Configuration::from_occupied(shape, sites);
}

std::vector<SiteSwap> normalize_1d(const Configuration& config) {
    const auto& shape = config.shape();
    if (shape.effective_dim() != 1) throw ValidationError("normalize_1d needs a path lattice");
    if (shape.boundary != BoundaryMode::zero_clamped) {
        throw ValidationError("normalize_1d is defined on zero-clamped paths");
    }
    const std::int64_t nv = shape.vertex_count();
    const std::int64_t a = config.t1();
    if (a == 0) return {};

    const Configuration target = canonical_max_singleton_1d(config.fiber(), shape);
    const std::int64_t big_size = a - config.t2() / 2 + 1;

    PathRewriter rw;
    rw.cells = config.cells();
    rw.guard_limit = 4 * nv * (a + 2);

    // Stage 0: carry the leftmost component to the first interior site.
    // Caterpillar moves for runs (tail cell to the slot before the head),
    // plain slides for singletons; the space to the left is empty, so every
    // step extends or relocates exactly one component.
    for (;;) {
        const Run first = scan_runs(rw.cells).front();
        if (first.left == 1) break;
        rw.swap(first.left - 1, first.size() >= 2 ? first.right : first.left);
    }

    // Stage 1: grow the prefix run to the max-singleton component size by
    // pulling cells out of the leftmost donor run of size >= 2, one cell
    // per cascade. Only singletons can sit between the prefix and the
    // donor; the cascade ripples the borrowed cell leftward through them.
    // Each swap's target slot is adjacent to exactly one component: its
    // right neighbor is either empty or the very cell being switched off,
    // so the component count never moves.
    for (;;) {
        const auto runs = scan_runs(rw.cells);
        const Run& prefix = runs.front();
        if (prefix.size() >= big_size) break;
        std::size_t donor = runs.size();
        for (std::size_t i = 1; i < runs.size(); ++i) {
            if (runs[i].size() >= 2) {
                donor = i;
                break;
            }
        }
        // The component count c fixes the donor's existence: while the
        // prefix is short of a - c + 1 cells some other component has >= 2.
        if (donor == runs.size()) {
            throw std::logic_error("normalize_1d: no donor run despite a short prefix");
        }
        for (std::size_t m = donor; m >= 1; --m) {
            rw.swap(runs[m - 1].right + 1, runs[m].left);
        }
    }

    // Stage 2: slide the singletons left onto the canonical gap-2 slots.
    const std::int64_t singleton_count = config.t2() / 2 - 1;
    for (std::int64_t i = 1; i <= singleton_count; ++i) {
        const std::int64_t slot = big_size + 2 * i;
        for (;;) {
            const auto runs = scan_runs(rw.cells);
            const std::int64_t at = runs[static_cast<std::size_t>(i)].left;
            if (at == slot) break;
            rw.swap(at - 1, at);
        }
    }

    if (rw.cells != target.cells()) {
        throw std::logic_error("normalize_1d did not reach the canonical configuration");
    }
    return rw.swaps;
}

} // namespace isinggof
