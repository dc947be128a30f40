#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "isinggof/errors.hpp"

namespace isinggof {

/// Site occupancy on the boundary layer.
///  - free: every site may be occupied (the usual setting for observed data).
///  - zero_clamped: the outermost layer is pinned to 0; only interior sites
///    count as admissible. An axis of extent 1 contributes no boundary, so a
///    1xN lattice clamps only the two path endpoints.
enum class BoundaryMode { free, zero_clamped };

/// A d-dimensional lattice graph of size N1 x ... x Nd. Vertices are the
/// integer points, edges join points differing by one in a single axis.
/// Linear site ids follow the documented cell ordering: first axis fastest,
/// i.e. site = c1 + c2*N1 + c3*N1*N2 + ... with 0-based coordinates. For a
/// 2D lattice read from a text grid this means axis 1 = file row, axis 2 =
/// file column, so ids run down columns (column-wise).
struct LatticeShape {
    std::vector<std::int64_t> dims;
    BoundaryMode boundary = BoundaryMode::free;

    LatticeShape() = default;
    LatticeShape(std::vector<std::int64_t> d, BoundaryMode b = BoundaryMode::free)
        : dims(std::move(d)), boundary(b) {
        validate();
    }

    void validate() const;

    int dim() const { return static_cast<int>(dims.size()); }

    /// Number of axes of extent >= 2; the graph dimension that actually
    /// matters for connectivity (a 1xN lattice is a path).
    int effective_dim() const;

    std::int64_t vertex_count() const;
    std::int64_t edge_count() const;

    std::int64_t stride(int axis) const;
    std::int64_t index_of(const std::vector<std::int64_t>& coords) const;
    std::vector<std::int64_t> coords_of(std::int64_t site) const;

    /// True when some axis of extent >= 2 has the site on its outer layer.
    bool is_boundary_site(std::int64_t site) const;

    /// Degree of the site in the lattice graph.
    int degree(std::int64_t site) const;

    /// True when the two sites share a lattice edge.
    bool adjacent(std::int64_t a, std::int64_t b) const;

    /// Appends the neighbors of `site` to `out` (not cleared first).
    void append_neighbors(std::int64_t site, std::vector<std::int64_t>& out) const;

    bool operator==(const LatticeShape& other) const {
        return dims == other.dims && boundary == other.boundary;
    }
};

/// Target sufficient statistics (a, b) identifying the fiber S(a, b) of all
/// configurations with T1 = a and T2 = b.
struct FiberId {
    std::int64_t a = 0;
    std::int64_t b = 0;

    bool operator==(const FiberId&) const = default;
};

/// A binary configuration on a lattice with cached sufficient statistics
///   T1 = number of occupied sites,
///   T2 = number of lattice edges whose endpoints differ,
/// plus occupancy index structures giving O(1) uniform site sampling and
/// O(1) maintenance under swaps. Statistics are 64-bit; no overflow for
/// |V| <= 2^31.
class Configuration {
public:
    explicit Configuration(LatticeShape shape);
    Configuration(LatticeShape shape, std::vector<std::uint8_t> cells);

    static Configuration from_occupied(LatticeShape shape,
                                       const std::vector<std::int64_t>& sites);

    const LatticeShape& shape() const { return shape_; }
    std::int64_t num_sites() const { return static_cast<std::int64_t>(cells_.size()); }
    const std::vector<std::uint8_t>& cells() const { return cells_; }
    bool occupied(std::int64_t site) const { return cells_[static_cast<std::size_t>(site)] != 0; }

    std::int64_t t1() const { return t1_; }
    std::int64_t t2() const { return t2_; }
    FiberId fiber() const { return {t1_, t2_}; }

    /// The {-1,+1} spin-representation statistics:
    /// (2*T1 - |V|, |E| - 2*T2).
    std::pair<std::int64_t, std::int64_t> spin_stats() const;

    /// T2 change that applying (on_site <- 1, off_site <- 0) would cause.
    /// Computed from the <= 4d neighboring cells only. Preconditions as in
    /// apply_swap but not checked here beyond debug assertions.
    std::int64_t swap_delta_t2(std::int64_t on_site, std::int64_t off_site) const;

    /// Applies the simple swap e_on - e_off: requires cells[on] == 0,
    /// cells[off] == 1 and, under zero_clamped, that on_site is interior.
    /// Returns the T2 change. T1 is unchanged. Throws InvalidSwapError on a
    /// precondition violation.
    std::int64_t apply_swap(std::int64_t on_site, std::int64_t off_site);

    /// Occupancy index access. "Admissible" excludes clamped boundary sites.
    std::int64_t one_count() const { return static_cast<std::int64_t>(ones_.size()); }
    std::int64_t zero_count() const { return static_cast<std::int64_t>(zeros_.size()); }
    std::int64_t one_site(std::int64_t k) const { return ones_[static_cast<std::size_t>(k)]; }
    std::int64_t zero_site(std::int64_t k) const { return zeros_[static_cast<std::size_t>(k)]; }
    std::int64_t admissible_count() const { return one_count() + zero_count(); }

    /// Bit-packed occupancy, site i -> bit i. Only for |V| <= 64.
    std::uint64_t packed_key() const;

    bool operator==(const Configuration& other) const {
        return shape_ == other.shape_ && cells_ == other.cells_;
    }

private:
    void build_indices();

    LatticeShape shape_;
    std::vector<std::uint8_t> cells_;
    std::int64_t t1_ = 0;
    std::int64_t t2_ = 0;
    std::vector<std::int64_t> ones_;
    std::vector<std::int64_t> zeros_;
    std::vector<std::int64_t> slot_; // per site: index into ones_/zeros_, -1 if clamped
};

/// Cached sufficient statistics (T1, T2).
inline std::pair<std::int64_t, std::int64_t> suff_stats(const Configuration& c) {
    return {c.t1(), c.t2()};
}

/// Recomputes (T1, T2) by a full scan, independently of the caches.
std::pair<std::int64_t, std::int64_t> recompute_suff_stats(const LatticeShape& shape,
                                                           const std::vector<std::uint8_t>& cells);

/// Connected components of the subgraph induced by the occupied sites.
struct ComponentCensus {
    std::vector<std::vector<std::int64_t>> members; // sorted site lists, in discovery order

    std::vector<std::int64_t> sizes() const;
    std::int64_t singleton_count() const;
};

ComponentCensus connected_components(const Configuration& config);

} // namespace isinggof
