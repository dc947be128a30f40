#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "isinggof/lattice.hpp"

namespace isinggof {

/// Brute-force ground truth at desk scale. Everything here enumerates
/// explicitly and is meant to be cheap to trust, not fast: fibers are listed
/// as a-subsets of the admissible sites, connectivity questions are answered
/// by breadth-first search over bit-packed states (|V| <= 64).

inline constexpr std::int64_t kDefaultEnumerationBudget = 10'000'000;

/// All configurations with T1 = a, T2 = b, in canonical (lexicographic
/// subset) order. Throws BudgetExceededError when C(#admissible, a) exceeds
/// the budget.
std::vector<Configuration> enumerate_fiber(const LatticeShape& shape, FiberId fiber,
                                           std::int64_t budget = kDefaultEnumerationBudget);

/// Same, bit-packed (requires |V| <= 64).
std::vector<std::uint64_t> enumerate_fiber_masks(const LatticeShape& shape, FiberId fiber,
                                                 std::int64_t budget = kDefaultEnumerationBudget);

/// Every fiber of the constant-T1 slice at once: map from T2 value to the
/// packed states. Useful when scanning all fibers of a small lattice.
std::map<std::int64_t, std::vector<std::uint64_t>> enumerate_t1_slice_masks(
    const LatticeShape& shape, std::int64_t a,
    std::int64_t budget = kDefaultEnumerationBudget);

/// Partition of `fiber_states` into classes connected by simple-swap paths
/// whose intermediate states all keep T1 = a and |T2 - b| <= expansion.
/// Intermediates are discovered on demand; the total number of visited
/// states is capped by `budget`. Returns groups of indices into
/// `fiber_states`, ordered by smallest member.
std::vector<std::vector<std::size_t>> swap_graph_components(
    const LatticeShape& shape, const std::vector<Configuration>& fiber_states,
    std::int64_t expansion, std::int64_t budget = kDefaultEnumerationBudget);

std::vector<std::vector<std::size_t>> swap_graph_components_masks(
    const LatticeShape& shape, const std::vector<std::uint64_t>& fiber_states,
    std::int64_t expansion, std::int64_t budget = kDefaultEnumerationBudget);

/// Number of independent degree-one moves of the model on this lattice:
/// sum over fibers of (|fiber| - 1), by full enumeration of the admissible
/// 2^k states. Requires at most 20 admissible sites.
std::int64_t degree1_move_count(const LatticeShape& shape);

/// Pearson chi-squared test of recorded samples against the uniform
/// distribution on an enumerated fiber.
struct ChiSquareResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::int64_t dof = 0;
    bool under_sampled = false; // fewer than 10 samples per fiber state
};

ChiSquareResult exact_fiber_distribution(const std::vector<Configuration>& samples,
                                         const std::vector<Configuration>& fiber_states);

/// Count-vector variant: counts[i] = observed visits of fiber state i.
ChiSquareResult exact_fiber_distribution_counts(const std::vector<std::int64_t>& counts);

} // namespace isinggof
