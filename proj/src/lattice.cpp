#include "isinggof/lattice.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

namespace isinggof {

void LatticeShape::validate() const {
    if (dims.empty()) throw ValidationError("lattice shape needs at least one axis");
    for (auto n : dims) {
        if (n < 1) throw ValidationError("lattice axis extents must be >= 1");
    }
    // Keep |V| comfortably inside int64 statistics range.
    std::int64_t v = 1;
    for (auto n : dims) {
        if (v > (std::int64_t{1} << 31) / n) {
            throw ValidationError("lattice too large: |V| must stay below 2^31");
        }
        v *= n;
    }
}

int LatticeShape::effective_dim() const {
    int d = 0;
    for (auto n : dims) {
        if (n >= 2) ++d;
    }
    return std::max(d, 1);
}

std::int64_t LatticeShape::vertex_count() const {
    std::int64_t v = 1;
    for (auto n : dims) v *= n;
    return v;
}

std::int64_t LatticeShape::edge_count() const {
    std::int64_t e = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        std::int64_t axis_edges = dims[i] - 1;
        for (std::size_t j = 0; j < dims.size(); ++j) {
            if (j != i) axis_edges *= dims[j];
        }
        e += axis_edges;
    }
    return e;
}

std::int64_t LatticeShape::stride(int axis) const {
    std::int64_t s = 1;
    for (int k = 0; k < axis; ++k) s *= dims[static_cast<std::size_t>(k)];
    return s;
}

std::int64_t LatticeShape::index_of(const std::vector<std::int64_t>& coords) const {
    if (coords.size() != dims.size()) throw ValidationError("coordinate arity mismatch");
    std::int64_t site = 0;
    std::int64_t s = 1;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (coords[k] < 0 || coords[k] >= dims[k]) throw ValidationError("coordinate out of range");
        site += coords[k] * s;
        s *= dims[k];
    }
    return site;
}

std::vector<std::int64_t> LatticeShape::coords_of(std::int64_t site) const {
    std::vector<std::int64_t> c(dims.size());
    for (std::size_t k = 0; k < dims.size(); ++k) {
        c[k] = site % dims[k];
        site /= dims[k];
    }
    return c;
}

bool LatticeShape::is_boundary_site(std::int64_t site) const {
    for (std::size_t k = 0; k < dims.size(); ++k) {
        const std::int64_t n = dims[k];
        const std::int64_t c = site % n;
        site /= n;
        if (n >= 2 && (c == 0 || c == n - 1)) return true;
    }
    return false;
}

int LatticeShape::degree(std::int64_t site) const {
    int deg = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        const std::int64_t n = dims[k];
        const std::int64_t c = site % n;
        site /= n;
        if (c > 0) ++deg;
        if (c < n - 1) ++deg;
    }
    return deg;
}

bool LatticeShape::adjacent(std::int64_t a, std::int64_t b) const {
    std::int64_t diff_axes = 0;
    bool unit_step = false;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        const std::int64_t n = dims[k];
        const std::int64_t ca = a % n;
        const std::int64_t cb = b % n;
        a /= n;
        b /= n;
        if (ca != cb) {
            ++diff_axes;
            unit_step = (ca - cb == 1 || cb - ca == 1);
        }
    }
    return diff_axes == 1 && unit_step;
}

void LatticeShape::append_neighbors(std::int64_t site, std::vector<std::int64_t>& out) const {
    std::int64_t rem = site;
    std::int64_t s = 1;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        const std::int64_t n = dims[k];
        const std::int64_t c = rem % n;
        rem /= n;
        if (c > 0) out.push_back(site - s);
        if (c < n - 1) out.push_back(site + s);
        s *= n;
    }
}

Configuration::Configuration(LatticeShape shape)
    : Configuration(std::move(shape), std::vector<std::uint8_t>()) {}

Configuration::Configuration(LatticeShape shape, std::vector<std::uint8_t> cells)
    : shape_(std::move(shape)), cells_(std::move(cells)) {
    shape_.validate();
    const auto nv = static_cast<std::size_t>(shape_.vertex_count());
    if (cells_.empty()) {
        cells_.assign(nv, 0);
    } else if (cells_.size() != nv) {
        throw ValidationError("cell array length does not match the lattice shape");
    }
    for (auto& v : cells_) {
        if (v > 1) throw ValidationError("cells must be 0 or 1");
    }
    if (shape_.boundary == BoundaryMode::zero_clamped) {
        for (std::int64_t v = 0; v < static_cast<std::int64_t>(nv); ++v) {
            if (cells_[static_cast<std::size_t>(v)] && shape_.is_boundary_site(v)) {
                throw ValidationError("zero_clamped configuration has an occupied boundary site");
            }
        }
    }
    std::tie(t1_, t2_) = recompute_suff_stats(shape_, cells_);
    build_indices();
}

Configuration Configuration::from_occupied(LatticeShape shape,
                                           const std::vector<std::int64_t>& sites) {
    std::vector<std::uint8_t> cells(static_cast<std::size_t>(shape.vertex_count()), 0);
    for (auto s : sites) {
        if (s < 0 || s >= static_cast<std::int64_t>(cells.size())) {
            throw ValidationError("occupied site " + std::to_string(s) + " out of range");
        }
        cells[static_cast<std::size_t>(s)] = 1;
    }
    return Configuration(std::move(shape), std::move(cells));
}

void Configuration::build_indices() {
    const auto nv = static_cast<std::int64_t>(cells_.size());
    slot_.assign(static_cast<std::size_t>(nv), -1);
    ones_.clear();
    zeros_.clear();
    const bool clamped = shape_.boundary == BoundaryMode::zero_clamped;
    for (std::int64_t v = 0; v < nv; ++v) {
        if (clamped && shape_.is_boundary_site(v)) continue; // permanently zero
        if (cells_[static_cast<std::size_t>(v)]) {
            slot_[static_cast<std::size_t>(v)] = static_cast<std::int64_t>(ones_.size());
            ones_.push_back(v);
        } else {
            slot_[static_cast<std::size_t>(v)] = static_cast<std::int64_t>(zeros_.size());
            zeros_.push_back(v);
        }
    }
}

std::pair<std::int64_t, std::int64_t> Configuration::spin_stats() const {
    return {2 * t1_ - shape_.vertex_count(), shape_.edge_count() - 2 * t2_};
}

namespace {

/// T2 change from flipping one site, evaluated on the current cells.
/// to_one: each empty neighbor adds a disagreeing edge, each occupied
/// neighbor removes one; reversed for clearing a site.
std::int64_t flip_delta_t2(const LatticeShape& shape, const std::vector<std::uint8_t>& cells,
                           std::int64_t site, bool to_one) {
    std::int64_t delta = 0;
    std::int64_t rem = site;
    std::int64_t stride = 1;
    for (std::size_t k = 0; k < shape.dims.size(); ++k) {
        const std::int64_t n = shape.dims[k];
        const std::int64_t c = rem % n;
        rem /= n;
        if (c > 0) delta += cells[static_cast<std::size_t>(site - stride)] ? -1 : 1;
        if (c < n - 1) delta += cells[static_cast<std::size_t>(site + stride)] ? -1 : 1;
        stride *= n;
    }
    return to_one ? delta : -delta;
}

} // namespace

std::int64_t Configuration::swap_delta_t2(std::int64_t on_site, std::int64_t off_site) const {
    assert(!occupied(on_site) && occupied(off_site));
    // Both flip deltas are evaluated on the current cells. When the two
    // sites are adjacent their shared edge is seen by the off-flip with the
    // on-site still empty (-1) although it ends up occupied (+1): add 2.
    std::int64_t delta = flip_delta_t2(shape_, cells_, on_site, true) +
                         flip_delta_t2(shape_, cells_, off_site, false);
    if (shape_.adjacent(on_site, off_site)) delta += 2;
    return delta;
}

std::int64_t Configuration::apply_swap(std::int64_t on_site, std::int64_t off_site) {
    if (on_site < 0 || on_site >= num_sites() || off_site < 0 || off_site >= num_sites()) {
        throw InvalidSwapError("swap site out of range");
    }
    if (occupied(on_site) || !occupied(off_site)) {
        throw InvalidSwapError("swap requires an empty on-site and an occupied off-site");
    }
    if (shape_.boundary == BoundaryMode::zero_clamped && shape_.is_boundary_site(on_site)) {
        throw InvalidSwapError("swap would occupy a clamped boundary site");
    }

    const std::int64_t delta = swap_delta_t2(on_site, off_site);
    cells_[static_cast<std::size_t>(on_site)] = 1;
    cells_[static_cast<std::size_t>(off_site)] = 0;
    t2_ += delta;

    // Index maintenance: the on-site takes the off-site's slot among the
    // ones, and vice versa among the zeros.
    const std::int64_t slot_on = slot_[static_cast<std::size_t>(on_site)];
    const std::int64_t slot_off = slot_[static_cast<std::size_t>(off_site)];
    ones_[static_cast<std::size_t>(slot_off)] = on_site;
    zeros_[static_cast<std::size_t>(slot_on)] = off_site;
    slot_[static_cast<std::size_t>(on_site)] = slot_off;
    slot_[static_cast<std::size_t>(off_site)] = slot_on;
    return delta;
}

std::uint64_t Configuration::packed_key() const {
    if (num_sites() > 64) throw ValidationError("packed_key requires |V| <= 64");
    std::uint64_t key = 0;
    for (std::int64_t v = 0; v < num_sites(); ++v) {
        if (cells_[static_cast<std::size_t>(v)]) key |= (std::uint64_t{1} << v);
    }
    return key;
}

std::pair<std::int64_t, std::int64_t> recompute_suff_stats(const LatticeShape& shape,
                                                           const std::vector<std::uint8_t>& cells) {
    std::int64_t t1 = 0;
    for (auto v : cells) t1 += v;
    std::int64_t t2 = 0;
    const std::int64_t nv = static_cast<std::int64_t>(cells.size());
    for (std::int64_t v = 0; v < nv; ++v) {
        std::int64_t rem = v;
        std::int64_t stride = 1;
        for (std::size_t k = 0; k < shape.dims.size(); ++k) {
            const std::int64_t n = shape.dims[k];
            const std::int64_t c = rem % n;
            rem /= n;
            if (c < n - 1 &&
                cells[static_cast<std::size_t>(v)] != cells[static_cast<std::size_t>(v + stride)]) {
                ++t2;
            }
            stride *= n;
        }
    }
    return {t1, t2};
}

std::vector<std::int64_t> ComponentCensus::sizes() const {
    std::vector<std::int64_t> s;
    s.reserve(members.size());
    for (const auto& m : members) s.push_back(static_cast<std::int64_t>(m.size()));
    return s;
}

std::int64_t ComponentCensus::singleton_count() const {
    std::int64_t n = 0;
    for (const auto& m : members) {
        if (m.size() == 1) ++n;
    }
    return n;
}

ComponentCensus connected_components(const Configuration& config) {
    ComponentCensus census;
    const auto& shape = config.shape();
    const std::int64_t nv = config.num_sites();
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(nv), 0);
    std::vector<std::int64_t> stack;
    std::vector<std::int64_t> nbrs;
    for (std::int64_t v = 0; v < nv; ++v) {
        if (!config.occupied(v) || seen[static_cast<std::size_t>(v)]) continue;
        std::vector<std::int64_t> comp;
        stack.push_back(v);
        seen[static_cast<std::size_t>(v)] = 1;
        while (!stack.empty()) {
            const std::int64_t u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            nbrs.clear();
            shape.append_neighbors(u, nbrs);
            for (auto w : nbrs) {
                if (config.occupied(w) && !seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    stack.push_back(w);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        census.members.push_back(std::move(comp));
    }
    return census;
}

} // namespace isinggof
