#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "isinggof/lattice.hpp"
#include "isinggof/rng.hpp"

namespace isinggof {

/// expanded: run on S*(a,b), the fiber plus the minimal T2 band that makes
/// simple swaps connect it; strict: accept only moves staying on S(a,b)
/// exactly (the classic reducible baseline).
enum class ChainMode { expanded, strict };

enum class RecordPolicy { on_fiber_only, all_states };

struct ChainSettings {
    ChainMode mode = ChainMode::expanded;
    FiberId target;
    std::int64_t steps = 100000;
    std::int64_t burn_in = 10000;
    std::int64_t thinning = 10;
    std::uint64_t seed = 0;
    RecordPolicy record_policy = RecordPolicy::on_fiber_only;
    bool store_configurations = false; // keep recorded states (desk scale only)

    void validate() const {
        if (steps < 1) throw ValidationError("chain needs at least one step");
        if (burn_in < 0 || burn_in >= steps) throw ValidationError("require 0 <= burn_in < steps");
        if (thinning < 1) throw ValidationError("thinning must be >= 1");
    }
};

/// Membership test for the expanded sample space S*(a,b) in dimension d:
/// t1 = a and |t2 - b| <= 2(d-1). With even_offsets_only the offset must
/// additionally be even (T2 parity is invariant on zero-clamped lattices);
/// free-boundary chains admit odd intermediate values inside the band.
bool expanded_contains(std::int64_t t1, std::int64_t t2, FiberId target, int d,
                       bool even_offsets_only = true);

/// One Metropolis chain over simple swaps. The proposal draws a uniform
/// admissible empty site and a uniform occupied site, a symmetric kernel on
/// the constant-T1 slice; acceptance is the S* (or strict fiber) indicator.
/// Rejected proposals hold, which gives aperiodicity.
class SwapChain {
public:
    SwapChain(Configuration start, const ChainSettings& settings);

    /// One proposal; returns whether it was accepted.
    bool step();

    const Configuration& state() const { return config_; }
    const ChainSettings& settings() const { return settings_; }
    std::int64_t steps_taken() const { return steps_taken_; }
    std::int64_t accepted() const { return accepted_; }
    bool on_fiber() const { return config_.t2() == settings_.target.b; }

private:
    Configuration config_;
    ChainSettings settings_;
    Rng rng_;
    int band_dim_;
    bool even_band_;
    std::int64_t steps_taken_ = 0;
    std::int64_t accepted_ = 0;
};

struct ChainRun {
    double acceptance_rate = 0.0;
    double on_fiber_fraction = 0.0; // fraction of post-burn-in states on the fiber
    std::int64_t recorded_count = 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> recorded_stats; // (t1,t2) per record
    std::vector<Configuration> samples; // filled when store_configurations
    Configuration final_state;
};

using SampleSink = std::function<void(const Configuration&, std::int64_t step)>;

/// Runs `settings.steps` proposals from `start`. After burn-in, every
/// thinning-th state is recorded when the record policy admits it;
/// on_fiber_only records only states with t2 = b, which is the projection
/// of the chain back onto S(a,b). Bit-reproducible for a fixed seed.
ChainRun run_chain(const Configuration& start, const ChainSettings& settings,
                   const SampleSink& sink = {});

/// --- Boltzmann-model generator (alternative-model data) ---

enum class T3Kind {
    none,
    second_nearest, // sum over length-2 lattice paths of |y_i - y_k|
    diagonal,       // same, restricted to diagonal endpoint pairs
    overall_parity  // indicator of T1 being even
};

enum class GeneratorBoundary { free, periodic };

/// Unnormalized density exp(alpha*T1 + beta*T2 + gamma*T3), or the
/// non-homogeneous exp(sum alpha_i y_i + sum beta_ij |y_i - y_j|) when the
/// per-site/per-edge arrays are set. Exactly one parameterization may be
/// active. The normalizer is never computed.
struct BoltzmannModel {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    T3Kind t3_kind = T3Kind::none;
    std::vector<double> vertex_alphas; // size |V| when set
    std::vector<double> edge_betas;    // size = edge count for the boundary; see edge order below
    GeneratorBoundary boundary = GeneratorBoundary::periodic;

    bool non_homogeneous() const { return !vertex_alphas.empty() || !edge_betas.empty(); }
};

/// Edge order used for edge_betas: axes in order; within an axis all
/// non-wrap edges (site, site+stride) by ascending site, then, if periodic
/// and the axis extent is >= 3, the wrap edges by ascending site.
std::int64_t generator_edge_count(const LatticeShape& shape, GeneratorBoundary boundary);

/// Single-site-flip Metropolis chain targeting the model density. The
/// initial state is an iid fair-coin configuration on the admissible sites.
class BoltzmannSampler {
public:
    BoltzmannSampler(BoltzmannModel model, LatticeShape shape, std::uint64_t seed);

    bool step();  // one site proposal; returns accepted
    void sweep(); // |admissible| proposals

    const std::vector<std::uint8_t>& cells() const { return cells_; }
    std::int64_t t1() const { return t1_; }

    /// Snapshot as a Configuration (statistics on the plain lattice graph,
    /// regardless of the generator's own boundary handling).
    Configuration configuration() const;

private:
    double flip_log_ratio(std::int64_t site) const;

    BoltzmannModel model_;
    LatticeShape shape_;
    Rng rng_;
    std::vector<std::uint8_t> cells_;
    std::vector<std::int64_t> admissible_;
    // flattened per-site adjacency: [offsets_[v], offsets_[v+1]) indexes
    // neighbor/edge-id pairs
    std::vector<std::int64_t> offsets_;
    std::vector<std::int64_t> nbr_site_;
    std::vector<std::int64_t> nbr_edge_;
    // per-site T3 partner lists (with path multiplicity)
    std::vector<std::int64_t> t3_offsets_;
    std::vector<std::int64_t> t3_partner_;
    std::int64_t t1_ = 0;
};

/// Runs `steps` proposals and returns the final state.
Configuration generate_boltzmann(const BoltzmannModel& model, const LatticeShape& shape,
                                 std::int64_t steps, std::uint64_t seed);

} // namespace isinggof
