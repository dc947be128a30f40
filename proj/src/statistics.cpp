#include "isinggof/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <sstream>

#include "isinggof/rng.hpp"

namespace isinggof {

MotifWindow MotifWindow::rotated90() const {
    MotifWindow out;
    out.rows = cols;
    out.cols = rows;
    out.cells.resize(cells.size());
    for (std::int64_t r = 0; r < rows; ++r) {
        for (std::int64_t c = 0; c < cols; ++c) {
            out.cells[static_cast<std::size_t>(c * out.cols + (rows - 1 - r))] = at(r, c);
        }
    }
    return out;
}

MotifWindow MotifWindow::mirrored() const {
    MotifWindow out;
    out.rows = rows;
    out.cols = cols;
    out.cells.resize(cells.size());
    for (std::int64_t r = 0; r < rows; ++r) {
        for (std::int64_t c = 0; c < cols; ++c) {
            out.cells[static_cast<std::size_t>(r * cols + (cols - 1 - c))] = at(r, c);
        }
    }
    return out;
}

Motif::Motif(const std::vector<std::string>& rows, SymmetryClosure closure) : closure_(closure) {
    if (rows.empty() || rows.front().empty()) throw ValidationError("motif window is empty");
    base_.rows = static_cast<std::int64_t>(rows.size());
    base_.cols = static_cast<std::int64_t>(rows.front().size());
    if (base_.rows > 4 || base_.cols > 4) throw ValidationError("motif window sides must be <= 4");
    bool has_fixed_cell = false;
    for (const auto& row : rows) {
        if (static_cast<std::int64_t>(row.size()) != base_.cols) {
            throw ValidationError("motif rows must all have the same length");
        }
        for (char ch : row) {
            switch (ch) {
                case '1':
                    base_.cells.push_back(1);
                    has_fixed_cell = true;
                    break;
                case '0':
                    base_.cells.push_back(0);
                    has_fixed_cell = true;
                    break;
                case '.':
                    base_.cells.push_back(-1);
                    break;
                default:
                    throw ValidationError("motif cells must be one of '1', '0', '.'");
            }
        }
    }
    if (!has_fixed_cell) throw ValidationError("motif needs at least one non-wildcard cell");

    std::vector<MotifWindow> orbit{base_};
    if (closure_ != SymmetryClosure::none) {
        MotifWindow w = base_;
        for (int i = 0; i < 3; ++i) {
            w = w.rotated90();
            orbit.push_back(w);
        }
        if (closure_ == SymmetryClosure::rotations_and_reflections) {
            MotifWindow m = base_.mirrored();
            orbit.push_back(m);
            for (int i = 0; i < 3; ++i) {
                m = m.rotated90();
                orbit.push_back(m);
            }
        }
    }
    for (const auto& w : orbit) {
        if (std::find(variants_.begin(), variants_.end(), w) == variants_.end()) {
            variants_.push_back(w);
        }
    }
}

namespace {

/// 2D view over a configuration; 1D lattices become one-row grids.
struct GridView {
    const Configuration* config;
    std::int64_t rows;
    std::int64_t cols;

    explicit GridView(const Configuration& c) : config(&c) {
        const auto& dims = c.shape().dims;
        if (dims.size() == 1) {
            rows = 1;
            cols = dims[0];
        } else if (dims.size() == 2) {
            rows = dims[0];
            cols = dims[1];
        } else {
            throw ValidationError("grid statistics need a 1D or 2D lattice");
        }
    }

    bool at(std::int64_t r, std::int64_t c) const {
        // first axis fastest: site = r + c*rows (trivially c for 1D)
        return config->occupied(r + c * rows);
    }
};

bool window_matches(const GridView& grid, const MotifWindow& w, std::int64_t r0, std::int64_t c0) {
    for (std::int64_t r = 0; r < w.rows; ++r) {
        for (std::int64_t c = 0; c < w.cols; ++c) {
            const std::int8_t want = w.at(r, c);
            if (want < 0) continue;
            if (grid.at(r0 + r, c0 + c) != (want != 0)) return false;
        }
    }
    return true;
}

} // namespace

std::int64_t count_motif(const Configuration& config, const Motif& motif) {
    const GridView grid(config);
    std::int64_t count = 0;
    for (const auto& w : motif.variants()) {
        for (std::int64_t r0 = 0; r0 + w.rows <= grid.rows; ++r0) {
            for (std::int64_t c0 = 0; c0 + w.cols <= grid.cols; ++c0) {
                if (window_matches(grid, w, r0, c0)) ++count;
            }
        }
    }
    return count;
}

Motif default_diagonal_motif() {
    return Motif({"10", "01"}, SymmetryClosure::rotations_and_reflections);
}

Motif default_adjacent_motif() {
    return Motif({"11", "00"}, SymmetryClosure::rotations);
}

Motif default_consecutive_motif() {
    return Motif({"0110"}, SymmetryClosure::rotations);
}

namespace {

SymmetryClosure parse_closure(const std::string& token, long line) {
    if (token == "none") return SymmetryClosure::none;
    if (token == "rotations") return SymmetryClosure::rotations;
    if (token == "rotations_and_reflections") return SymmetryClosure::rotations_and_reflections;
    throw ParseError("unknown symmetry closure '" + token + "'", line);
}

} // namespace

std::vector<std::pair<std::string, Motif>> parse_motif_file(std::istream& in) {
    std::vector<std::pair<std::string, Motif>> motifs;
    std::string line;
    long line_no = 0;

    std::string name;
    SymmetryClosure closure = SymmetryClosure::none;
    bool in_block = false;
    std::vector<std::string> rows;
    long header_line = 0;

    auto flush = [&]() {
        if (!in_block) return;
        if (rows.empty()) throw ParseError("motif block has a header but no rows", header_line);
        motifs.emplace_back(name, Motif(rows, closure));
        rows.clear();
        in_block = false;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        if (!trimmed.empty() && trimmed.front() == '#') continue;
        if (trimmed.empty()) {
            flush();
            continue;
        }
        if (!in_block) {
            std::istringstream hdr(trimmed);
            std::string first, second;
            hdr >> first >> second;
            if (second.empty()) {
                name = "motif" + std::to_string(motifs.size());
                closure = parse_closure(first, line_no);
            } else {
                name = first;
                closure = parse_closure(second, line_no);
            }
            in_block = true;
            header_line = line_no;
        } else {
            rows.push_back(trimmed);
        }
    }
    flush();
    return motifs;
}

std::vector<WindowPair> sample_disjoint_pairs(const LatticeShape& shape,
                                              const SubtableScheme& scheme) {
    scheme.validate();
    if (shape.dims.size() != 2) throw ValidationError("subtable statistics need a 2D lattice");
    const std::int64_t rows = shape.dims[0];
    const std::int64_t cols = shape.dims[1];
    const std::int64_t n = scheme.window;
    const std::int64_t pr = rows - n + 1;
    const std::int64_t pc = cols - n + 1;
    if (pr < 1 || pc < 1) throw DoesNotFitError("subtable window larger than the lattice");
    if (rows < 2 * n && cols < 2 * n) {
        throw DoesNotFitError("two disjoint windows cannot fit in the lattice");
    }

    std::vector<WindowPair> pairs;
    pairs.reserve(static_cast<std::size_t>(scheme.pairs));
    for (std::int64_t k = 0; k < scheme.pairs; ++k) {
        Rng rng(derive_stream(scheme.seed, static_cast<std::uint64_t>(k)));
        for (std::int64_t tries = 0;; ++tries) {
            if (tries >= 1'000'000) {
                throw DoesNotFitError("rejection sampling of disjoint windows did not converge");
            }
            WindowPair p;
            p.r1 = rng.uniform_below(pr);
            p.c1 = rng.uniform_below(pc);
            p.r2 = rng.uniform_below(pr);
            p.c2 = rng.uniform_below(pc);
            const auto dr = p.r1 > p.r2 ? p.r1 - p.r2 : p.r2 - p.r1;
            const auto dc = p.c1 > p.c2 ? p.c1 - p.c2 : p.c2 - p.c1;
            const bool overlap = dr < n && dc < n;
            if (!overlap) {
                pairs.push_back(p);
                break;
            }
        }
    }
    return pairs;
}

namespace {

/// (T1, T2) of an N x N window; T2 counts only the window's internal edges.
std::pair<std::int64_t, std::int64_t> window_stats(const GridView& grid, std::int64_t r0,
                                                   std::int64_t c0, std::int64_t n) {
    std::int64_t a = 0;
    std::int64_t b = 0;
    for (std::int64_t r = 0; r < n; ++r) {
        for (std::int64_t c = 0; c < n; ++c) {
            const bool v = grid.at(r0 + r, c0 + c);
            a += v;
            if (r + 1 < n && v != grid.at(r0 + r + 1, c0 + c)) ++b;
            if (c + 1 < n && v != grid.at(r0 + r, c0 + c + 1)) ++b;
        }
    }
    return {a, b};
}

} // namespace

double non_homogeneity(const Configuration& config, const SubtableScheme& scheme,
                       NonHomKind kind) {
    const GridView grid(config);
    const auto pairs = sample_disjoint_pairs(config.shape(), scheme);
    const std::int64_t n = scheme.window;
    std::int64_t dt1 = 0;
    std::int64_t dt2 = 0;
    for (const auto& p : pairs) {
        const auto [a1, b1] = window_stats(grid, p.r1, p.c1, n);
        const auto [a2, b2] = window_stats(grid, p.r2, p.c2, n);
        dt1 = std::max<std::int64_t>(dt1, a1 > a2 ? a1 - a2 : a2 - a1);
        dt2 = std::max<std::int64_t>(dt2, b1 > b2 ? b1 - b2 : b2 - b1);
    }
    switch (kind) {
        case NonHomKind::dT1:
            return static_cast<double>(dt1);
        case NonHomKind::dT2:
            return static_cast<double>(dt2);
        case NonHomKind::dT12:
            return std::max(static_cast<double>(dt1) / static_cast<double>(n * n),
                            static_cast<double>(dt2) / static_cast<double>(2 * n * (n - 1)));
    }
    throw ValidationError("unknown non-homogeneity kind");
}

double evaluate(const Configuration& config, const StatDescriptor& descriptor,
                std::uint64_t eval_seed) {
    switch (descriptor.kind) {
        case StatDescriptor::Kind::motif_count:
            if (!descriptor.motif) throw ValidationError("motif descriptor without a motif");
            return static_cast<double>(count_motif(config, *descriptor.motif));
        case StatDescriptor::Kind::dT1:
        case StatDescriptor::Kind::dT2:
        case StatDescriptor::Kind::dT12: {
            SubtableScheme scheme = descriptor.scheme;
            scheme.seed = derive_stream(descriptor.scheme.seed, eval_seed);
            const NonHomKind kind = descriptor.kind == StatDescriptor::Kind::dT1  ? NonHomKind::dT1
                                    : descriptor.kind == StatDescriptor::Kind::dT2 ? NonHomKind::dT2
                                                                                   : NonHomKind::dT12;
            return non_homogeneity(config, scheme, kind);
        }
    }
    throw ValidationError("unknown statistic kind");
}

std::vector<StatDescriptor> default_descriptors(const SubtableScheme& scheme) {
    std::vector<StatDescriptor> out;
    out.push_back({StatDescriptor::Kind::motif_count, "diagonal_pairs", default_diagonal_motif(),
                   scheme, Sidedness::upper});
    out.push_back({StatDescriptor::Kind::motif_count, "adjacent_pairs", default_adjacent_motif(),
                   scheme, Sidedness::two_sided});
    out.push_back({StatDescriptor::Kind::motif_count, "consecutive_pairs",
                   default_consecutive_motif(), scheme, Sidedness::two_sided});
    out.push_back({StatDescriptor::Kind::dT1, "dT1", std::nullopt, scheme, Sidedness::upper});
    out.push_back({StatDescriptor::Kind::dT2, "dT2", std::nullopt, scheme, Sidedness::upper});
    out.push_back({StatDescriptor::Kind::dT12, "dT12", std::nullopt, scheme, Sidedness::upper});
    return out;
}

} // namespace isinggof
