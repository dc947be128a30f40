#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "isinggof/lattice.hpp"

namespace isinggof {

enum class SymmetryClosure { none, rotations, rotations_and_reflections };

/// A concrete binary window: cell values 1, 0, or -1 for wildcard.
struct MotifWindow {
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    std::vector<std::int8_t> cells; // row-major within the window

    std::int8_t at(std::int64_t r, std::int64_t c) const {
        return cells[static_cast<std::size_t>(r * cols + c)];
    }

    MotifWindow rotated90() const;
    MotifWindow mirrored() const;

    bool operator==(const MotifWindow&) const = default;
};

/// A small pattern family: a window over {1, 0, wildcard} closed under the
/// requested symmetries. Window sides are at most 4 and at least one cell
/// must be non-wildcard. Identical variants are deduplicated, so e.g. a
/// palindromic 1x4 window under rotations yields two windows, not four.
class Motif {
public:
    /// Rows use characters '1', '0', '.' (wildcard).
    Motif(const std::vector<std::string>& rows, SymmetryClosure closure);

    const std::vector<MotifWindow>& variants() const { return variants_; }
    SymmetryClosure closure() const { return closure_; }
    const MotifWindow& window() const { return base_; }

private:
    MotifWindow base_;
    SymmetryClosure closure_;
    std::vector<MotifWindow> variants_;
};

/// Number of placements of any motif variant fully inside the lattice whose
/// non-wildcard cells match; overlapping placements all count. Lattices of
/// dimension 1 are treated as one-row grids.
std::int64_t count_motif(const Configuration& config, const Motif& motif);

/// The default pattern families. The isolation zeros keep the three counts
/// distinct: a bare domino would also match inside longer runs.
Motif default_diagonal_motif();    // 2x2 "10"/"01" plus its mirror image
Motif default_adjacent_motif();    // 2x2 with two edge-adjacent ones, rotations
Motif default_consecutive_motif(); // isolated domino "0110" plus vertical analog

/// Parses a motif file: blocks separated by blank lines; each block starts
/// with a header "<closure>" or "<name> <closure>" where closure is one of
/// none | rotations | rotations_and_reflections, followed by grid rows over
/// {1,0,.}. Lines starting with '#' are comments. Unnamed motifs get
/// "motif<index>".
std::vector<std::pair<std::string, Motif>> parse_motif_file(std::istream& in);

/// K pairs of disjoint N x N windows, sampled uniformly by rejection.
/// Disjointness is required within each pair only. Pair k is drawn from its
/// own derived RNG stream, so enlarging K keeps the earlier pairs.
struct SubtableScheme {
    std::int64_t pairs = 100;  // K
    std::int64_t window = 3;   // N
    std::uint64_t seed = 0;

    void validate() const {
        if (pairs < 1) throw ValidationError("subtable scheme needs K >= 1");
        if (window < 2) throw ValidationError("subtable scheme needs N >= 2");
    }
};

struct WindowPair {
    std::int64_t r1 = 0, c1 = 0;
    std::int64_t r2 = 0, c2 = 0;
};

std::vector<WindowPair> sample_disjoint_pairs(const LatticeShape& shape,
                                              const SubtableScheme& scheme);

enum class NonHomKind { dT1, dT2, dT12 };

/// Subtable non-homogeneity statistics: for each sampled pair the window
/// statistics (a, b) are compared, where b counts disagreeing edges among
/// the 2N(N-1) internal window edges only.
///   dT1  = max |a1 - a2|
///   dT2  = max |b1 - b2|
///   dT12 = max(dT1 / N^2, dT2 / (2N(N-1)))
double non_homogeneity(const Configuration& config, const SubtableScheme& scheme,
                       NonHomKind kind);

enum class Sidedness { lower, upper, two_sided };

/// A composable statistic: either a motif count or one of the subtable
/// statistics. `sided` is how downstream tests treat the statistic.
struct StatDescriptor {
    enum class Kind { motif_count, dT1, dT2, dT12 };

    Kind kind = Kind::motif_count;
    std::string name;
    std::optional<Motif> motif;   // motif_count
    SubtableScheme scheme;        // dT*
    Sidedness sided = Sidedness::two_sided;
};

/// Evaluates the descriptor on a configuration. Subtable statistics draw
/// their windows from a stream derived from (scheme.seed, eval_seed), so
/// the value is a pure function of (config, descriptor, eval_seed).
double evaluate(const Configuration& config, const StatDescriptor& descriptor,
                std::uint64_t eval_seed);

/// The six statistics in the usual order: diagonal / adjacent / consecutive
/// pairs, then dT1, dT2, dT12 on the given scheme. Diagonal pairs are
/// upper-tailed, the other motif counts two-sided, the non-homogeneity
/// statistics upper-tailed.
std::vector<StatDescriptor> default_descriptors(const SubtableScheme& scheme);

} // namespace isinggof
