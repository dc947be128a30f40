#include "isinggof/oracle.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "isinggof/special.hpp"

namespace isinggof {

namespace {

std::vector<std::int64_t> admissible_sites(const LatticeShape& shape) {
    std::vector<std::int64_t> sites;
    const bool clamped = shape.boundary == BoundaryMode::zero_clamped;
    for (std::int64_t v = 0; v < shape.vertex_count(); ++v) {
        if (clamped && shape.is_boundary_site(v)) continue;
        sites.push_back(v);
    }
    return sites;
}

/// C(n, k) saturated at `cap` to avoid overflow.
std::int64_t binomial_capped(std::int64_t n, std::int64_t k, std::int64_t cap) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::int64_t result = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        if (result > cap) return cap + 1;
        result = result * (n - k + i) / i;
    }
    return std::min(result, cap + 1);
}

/// Bit-packed view of a small lattice (|V| <= 64): per-site degree and
/// neighbor masks make T2 and swap deltas O(1).
struct MaskLattice {
    std::int64_t nv = 0;
    std::vector<int> deg;
    std::vector<std::uint64_t> nbr;
    std::vector<std::int64_t> sites; // admissible sites

    explicit MaskLattice(const LatticeShape& shape) {
        nv = shape.vertex_count();
        if (nv > 64) throw BudgetExceededError("bit-packed oracle requires |V| <= 64");
        deg.resize(static_cast<std::size_t>(nv));
        nbr.resize(static_cast<std::size_t>(nv));
        std::vector<std::int64_t> tmp;
        for (std::int64_t v = 0; v < nv; ++v) {
            tmp.clear();
            shape.append_neighbors(v, tmp);
            deg[static_cast<std::size_t>(v)] = static_cast<int>(tmp.size());
            std::uint64_t m = 0;
            for (auto u : tmp) m |= std::uint64_t{1} << u;
            nbr[static_cast<std::size_t>(v)] = m;
        }
        sites = admissible_sites(shape);
    }

    std::int64_t t2_of(std::uint64_t mask) const {
        std::int64_t t2 = 0;
        std::uint64_t rest = mask;
        while (rest) {
            const int v = std::countr_zero(rest);
            rest &= rest - 1;
            t2 += deg[static_cast<std::size_t>(v)] -
                  std::popcount(nbr[static_cast<std::size_t>(v)] & mask);
        }
        return t2;
    }

    /// T2 change for the swap (on <- 1, off <- 0) out of state `mask`.
    std::int64_t swap_delta(std::uint64_t mask, int on, int off) const {
        const std::uint64_t without = mask & ~(std::uint64_t{1} << off);
        return deg[static_cast<std::size_t>(on)] -
               2 * std::popcount(nbr[static_cast<std::size_t>(on)] & without) -
               deg[static_cast<std::size_t>(off)] +
               2 * std::popcount(nbr[static_cast<std::size_t>(off)] & without);
    }
};

/// Calls fn(mask, t2) for every a-subset of the admissible sites, in
/// lexicographic subset order.
template <typename Fn>
void for_each_subset(const MaskLattice& ml, std::int64_t a, std::int64_t budget, Fn&& fn) {
    const auto n = static_cast<std::int64_t>(ml.sites.size());
    if (a < 0 || a > n) return;
    if (binomial_capped(n, a, budget) > budget) {
        throw BudgetExceededError("fiber enumeration over budget; use a smaller instance");
    }
    if (a == 0) {
        fn(std::uint64_t{0}, std::int64_t{0});
        return;
    }
    std::vector<std::int64_t> pick(static_cast<std::size_t>(a));
    for (std::int64_t i = 0; i < a; ++i) pick[static_cast<std::size_t>(i)] = i;
    for (;;) {
        std::uint64_t mask = 0;
        for (auto idx : pick) mask |= std::uint64_t{1} << ml.sites[static_cast<std::size_t>(idx)];
        fn(mask, ml.t2_of(mask));
        // advance odometer
        std::int64_t k = a - 1;
        while (k >= 0 && pick[static_cast<std::size_t>(k)] == n - a + k) --k;
        if (k < 0) break;
        ++pick[static_cast<std::size_t>(k)];
        for (std::int64_t j = k + 1; j < a; ++j) {
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
}

Configuration config_from_mask(const LatticeShape& shape, std::uint64_t mask) {
    std::vector<std::int64_t> sites;
    std::uint64_t rest = mask;
    while (rest) {
        sites.push_back(std::countr_zero(rest));
        rest &= rest - 1;
    }
    return Configuration::from_occupied(shape, sites);
}

} // namespace

std::vector<std::uint64_t> enumerate_fiber_masks(const LatticeShape& shape, FiberId fiber,
                                                 std::int64_t budget) {
    MaskLattice ml(shape);
    std::vector<std::uint64_t> out;
    for_each_subset(ml, fiber.a, budget, [&](std::uint64_t mask, std::int64_t t2) {
        if (t2 == fiber.b) out.push_back(mask);
    });
    return out;
}

std::vector<Configuration> enumerate_fiber(const LatticeShape& shape, FiberId fiber,
                                           std::int64_t budget) {
    const auto masks = enumerate_fiber_masks(shape, fiber, budget);
    std::vector<Configuration> out;
    out.reserve(masks.size());
    for (auto m : masks) out.push_back(config_from_mask(shape, m));
    return out;
}

std::map<std::int64_t, std::vector<std::uint64_t>> enumerate_t1_slice_masks(
    const LatticeShape& shape, std::int64_t a, std::int64_t budget) {
    MaskLattice ml(shape);
    std::map<std::int64_t, std::vector<std::uint64_t>> slices;
    for_each_subset(ml, a, budget, [&](std::uint64_t mask, std::int64_t t2) {
        slices[t2].push_back(mask);
    });
    return slices;
}

std::vector<std::vector<std::size_t>> swap_graph_components_masks(
    const LatticeShape& shape, const std::vector<std::uint64_t>& fiber_states,
    std::int64_t expansion, std::int64_t budget) {
    if (fiber_states.empty()) return {};
    MaskLattice ml(shape);

    const std::int64_t a = std::popcount(fiber_states.front());
    const std::int64_t b = ml.t2_of(fiber_states.front());
    for (auto m : fiber_states) {
        if (std::popcount(m) != a || ml.t2_of(m) != b) {
            throw ValidationError("swap_graph_components: states are not all on one fiber");
        }
    }

    std::unordered_map<std::uint64_t, std::size_t> fiber_index;
    fiber_index.reserve(fiber_states.size() * 2);
    for (std::size_t i = 0; i < fiber_states.size(); ++i) fiber_index.emplace(fiber_states[i], i);

    std::uint64_t admissible_mask = 0;
    for (auto v : ml.sites) admissible_mask |= std::uint64_t{1} << v;

    std::unordered_set<std::uint64_t> visited;
    std::vector<std::vector<std::size_t>> components;
    std::vector<std::uint64_t> frontier;
    std::int64_t visit_count = 0;

    for (std::size_t start = 0; start < fiber_states.size(); ++start) {
        const std::uint64_t seed = fiber_states[start];
        if (visited.count(seed)) continue;
        std::vector<std::size_t> comp;
        frontier.assign(1, seed);
        visited.insert(seed);
        while (!frontier.empty()) {
            const std::uint64_t state = frontier.back();
            frontier.pop_back();
            if (++visit_count > budget) {
                throw BudgetExceededError("swap graph search over budget; use a smaller instance");
            }
            auto it = fiber_index.find(state);
            if (it != fiber_index.end()) comp.push_back(it->second);
            const std::int64_t t2 = ml.t2_of(state);
            std::uint64_t offs = state;
            while (offs) {
                const int off = std::countr_zero(offs);
                offs &= offs - 1;
                std::uint64_t ons = admissible_mask & ~state;
                while (ons) {
                    const int on = std::countr_zero(ons);
                    ons &= ons - 1;
                    const std::int64_t t2_next = t2 + ml.swap_delta(state, on, off);
                    if ((t2_next > b ? t2_next - b : b - t2_next) > expansion) continue;
                    const std::uint64_t next =
                        (state & ~(std::uint64_t{1} << off)) | (std::uint64_t{1} << on);
                    if (visited.insert(next).second) frontier.push_back(next);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
    }
    return components;
}

std::vector<std::vector<std::size_t>> swap_graph_components(
    const LatticeShape& shape, const std::vector<Configuration>& fiber_states,
    std::int64_t expansion, std::int64_t budget) {
    std::vector<std::uint64_t> masks;
    masks.reserve(fiber_states.size());
    for (const auto& c : fiber_states) masks.push_back(c.packed_key());
    return swap_graph_components_masks(shape, masks, expansion, budget);
}

std::int64_t degree1_move_count(const LatticeShape& shape) {
    MaskLattice ml(shape);
    const auto k = static_cast<int>(ml.sites.size());
    if (k > 20) {
        throw BudgetExceededError("degree1_move_count enumerates 2^k states; needs <= 20 sites");
    }
    // fiber sizes indexed by (t1, t2)
    const std::int64_t max_t2 = 2 * shape.dim() * k + 1;
    std::vector<std::int64_t> counts(static_cast<std::size_t>((k + 1) * max_t2), 0);
    const std::uint64_t limit = std::uint64_t{1} << k;
    for (std::uint64_t subset = 0; subset < limit; ++subset) {
        std::uint64_t mask = 0;
        std::uint64_t rest = subset;
        while (rest) {
            const int i = std::countr_zero(rest);
            rest &= rest - 1;
            mask |= std::uint64_t{1} << ml.sites[static_cast<std::size_t>(i)];
        }
        const std::int64_t t1 = std::popcount(mask);
        const std::int64_t t2 = ml.t2_of(mask);
        ++counts[static_cast<std::size_t>(t1 * max_t2 + t2)];
    }
    std::int64_t moves = 0;
    for (auto c : counts) {
        if (c > 1) moves += c - 1;
    }
    return moves;
}

ChiSquareResult exact_fiber_distribution_counts(const std::vector<std::int64_t>& counts) {
    if (counts.empty()) throw ValidationError("chi-squared test needs a non-empty fiber");
    std::int64_t total = 0;
    for (auto c : counts) total += c;
    if (total <= 0) throw ValidationError("chi-squared test needs at least one sample");

    const auto k = static_cast<std::int64_t>(counts.size());
    const double expected = static_cast<double>(total) / static_cast<double>(k);
    double stat = 0.0;
    for (auto c : counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    ChiSquareResult result;
    result.statistic = stat;
    result.dof = k - 1;
    result.under_sampled = total < 10 * k;
    result.p_value = k > 1 ? chi_square_sf(stat, static_cast<double>(k - 1)) : 1.0;
    return result;
}

ChiSquareResult exact_fiber_distribution(const std::vector<Configuration>& samples,
                                         const std::vector<Configuration>& fiber_states) {
    std::unordered_map<std::uint64_t, std::size_t> index;
    index.reserve(fiber_states.size() * 2);
    for (std::size_t i = 0; i < fiber_states.size(); ++i) {
        index.emplace(fiber_states[i].packed_key(), i);
    }
    std::vector<std::int64_t> counts(fiber_states.size(), 0);
    for (const auto& s : samples) {
        auto it = index.find(s.packed_key());
        if (it == index.end()) {
            throw ValidationError("sample configuration is not on the enumerated fiber");
        }
        ++counts[it->second];
    }
    return exact_fiber_distribution_counts(counts);
}

} // namespace isinggof
