#include "isinggof/sampler.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace isinggof {

bool expanded_contains(std::int64_t t1, std::int64_t t2, FiberId target, int d,
                       bool even_offsets_only) {
    if (d < 1) throw ValidationError("dimension must be >= 1");
    if (t1 != target.a) return false;
    const std::int64_t offset = t2 - target.b;
    if ((offset < 0 ? -offset : offset) > 2 * (d - 1)) return false;
    if (even_offsets_only && offset % 2 != 0) return false;
    return true;
}

SwapChain::SwapChain(Configuration start, const ChainSettings& settings)
    : config_(std::move(start)),
      settings_(settings),
      rng_(settings.seed),
      band_dim_(config_.shape().effective_dim()),
      even_band_(config_.shape().boundary == BoundaryMode::zero_clamped) {
    settings_.validate();
    if (config_.t1() != settings_.target.a) {
        throw ValidationError("start configuration has T1 = " + std::to_string(config_.t1()) +
                              ", target fiber needs " + std::to_string(settings_.target.a));
    }
    const bool inside =
        settings_.mode == ChainMode::strict
            ? config_.t2() == settings_.target.b
            : expanded_contains(config_.t1(), config_.t2(), settings_.target, band_dim_, even_band_);
    if (!inside) {
        throw ValidationError("start configuration lies outside the chain's sample space");
    }
}

bool SwapChain::step() {
    ++steps_taken_;
    if (config_.zero_count() == 0 || config_.one_count() == 0) {
        return false; // no swap applies; hold
    }
    const std::int64_t on = config_.zero_site(rng_.uniform_below(config_.zero_count()));
    const std::int64_t off = config_.one_site(rng_.uniform_below(config_.one_count()));
    const std::int64_t t2_next = config_.t2() + config_.swap_delta_t2(on, off);

    bool accept;
    if (settings_.mode == ChainMode::strict) {
        accept = t2_next == settings_.target.b;
    } else {
        accept = expanded_contains(settings_.target.a, t2_next, settings_.target, band_dim_,
                                   even_band_);
    }
    if (accept) {
        config_.apply_swap(on, off);
        ++accepted_;
    }
    return accept;
}

ChainRun run_chain(const Configuration& start, const ChainSettings& settings,
                   const SampleSink& sink) {
    SwapChain chain(start, settings);
    ChainRun run{.acceptance_rate = 0.0,
                 .on_fiber_fraction = 0.0,
                 .recorded_count = 0,
                 .recorded_stats = {},
                 .samples = {},
                 .final_state = chain.state()};
    std::int64_t post_burn_in = 0;
    std::int64_t on_fiber_states = 0;
    for (std::int64_t s = 1; s <= settings.steps; ++s) {
        chain.step();
        if (s <= settings.burn_in) continue;
        ++post_burn_in;
        const bool on_fiber = chain.on_fiber();
        if (on_fiber) ++on_fiber_states;
        if ((s - settings.burn_in) % settings.thinning != 0) continue;
        if (settings.record_policy == RecordPolicy::on_fiber_only && !on_fiber) continue;
        ++run.recorded_count;
        run.recorded_stats.emplace_back(chain.state().t1(), chain.state().t2());
        if (settings.store_configurations) run.samples.push_back(chain.state());
        if (sink) sink(chain.state(), s);
    }
    run.acceptance_rate =
        static_cast<double>(chain.accepted()) / static_cast<double>(settings.steps);
    run.on_fiber_fraction =
        post_burn_in > 0 ? static_cast<double>(on_fiber_states) / static_cast<double>(post_burn_in)
                         : 0.0;
    run.final_state = chain.state();
    return run;
}

std::int64_t generator_edge_count(const LatticeShape& shape, GeneratorBoundary boundary) {
    std::int64_t count = shape.edge_count();
    if (boundary == GeneratorBoundary::periodic) {
        for (std::size_t k = 0; k < shape.dims.size(); ++k) {
            if (shape.dims[k] < 3) continue; // a wrap edge would duplicate an existing one
            std::int64_t cross = 1;
            for (std::size_t j = 0; j < shape.dims.size(); ++j) {
                if (j != k) cross *= shape.dims[j];
            }
            count += cross;
        }
    }
    return count;
}

BoltzmannSampler::BoltzmannSampler(BoltzmannModel model, LatticeShape shape, std::uint64_t seed)
    : model_(std::move(model)), shape_(std::move(shape)), rng_(seed) {
    shape_.validate();
    const std::int64_t nv = shape_.vertex_count();
    const std::int64_t ne = generator_edge_count(shape_, model_.boundary);

    if (model_.non_homogeneous()) {
        if (!model_.vertex_alphas.empty() &&
            static_cast<std::int64_t>(model_.vertex_alphas.size()) != nv) {
            throw ValidationError("vertex_alphas must have one entry per site");
        }
        if (!model_.edge_betas.empty() &&
            static_cast<std::int64_t>(model_.edge_betas.size()) != ne) {
            throw ValidationError("edge_betas must have one entry per edge");
        }
        if ((!model_.vertex_alphas.empty() && model_.alpha != 0.0) ||
            (!model_.edge_betas.empty() && model_.beta != 0.0) || model_.gamma != 0.0 ||
            model_.t3_kind != T3Kind::none) {
            throw ValidationError(
                "exactly one parameterization may be active: per-site/per-edge arrays "
                "exclude the overlapping homogeneous parameters");
        }
    }

    // Build the edge list in the documented order and the per-site adjacency.
    const bool periodic = model_.boundary == GeneratorBoundary::periodic;
    std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> adj(
        static_cast<std::size_t>(nv));
    std::int64_t edge_id = 0;
    for (std::size_t k = 0; k < shape_.dims.size(); ++k) {
        const std::int64_t n = shape_.dims[k];
        const std::int64_t stride = shape_.stride(static_cast<int>(k));
        for (std::int64_t v = 0; v < nv; ++v) {
            if ((v / stride) % n < n - 1) {
                adj[static_cast<std::size_t>(v)].emplace_back(v + stride, edge_id);
                adj[static_cast<std::size_t>(v + stride)].emplace_back(v, edge_id);
                ++edge_id;
            }
        }
        if (periodic && n >= 3) {
            for (std::int64_t v = 0; v < nv; ++v) {
                if ((v / stride) % n == n - 1) {
                    const std::int64_t u = v - (n - 1) * stride;
                    adj[static_cast<std::size_t>(v)].emplace_back(u, edge_id);
                    adj[static_cast<std::size_t>(u)].emplace_back(v, edge_id);
                    ++edge_id;
                }
            }
        }
    }

    offsets_.assign(static_cast<std::size_t>(nv + 1), 0);
    for (std::int64_t v = 0; v < nv; ++v) {
        offsets_[static_cast<std::size_t>(v + 1)] =
            offsets_[static_cast<std::size_t>(v)] +
            static_cast<std::int64_t>(adj[static_cast<std::size_t>(v)].size());
    }
    nbr_site_.resize(static_cast<std::size_t>(offsets_.back()));
    nbr_edge_.resize(static_cast<std::size_t>(offsets_.back()));
    for (std::int64_t v = 0; v < nv; ++v) {
        std::int64_t at = offsets_[static_cast<std::size_t>(v)];
        for (const auto& [u, e] : adj[static_cast<std::size_t>(v)]) {
            nbr_site_[static_cast<std::size_t>(at)] = u;
            nbr_edge_[static_cast<std::size_t>(at)] = e;
            ++at;
        }
    }

    // T3 partner lists: for each neighbor j of v, the other endpoints k of
    // edges (j, k); one entry per path, so multiplicities count.
    t3_offsets_.assign(static_cast<std::size_t>(nv + 1), 0);
    if (model_.t3_kind == T3Kind::second_nearest || model_.t3_kind == T3Kind::diagonal) {
        const bool diagonal_only = model_.t3_kind == T3Kind::diagonal;
        auto wrapped_axis_distance = [&](std::int64_t x, std::int64_t y, std::int64_t n) {
            std::int64_t d = x > y ? x - y : y - x;
            if (periodic && n >= 3) d = std::min(d, n - d);
            return d;
        };
        auto is_diagonal = [&](std::int64_t x, std::int64_t y) {
            int ones = 0;
            for (std::size_t k = 0; k < shape_.dims.size(); ++k) {
                const std::int64_t n = shape_.dims[k];
                const std::int64_t d = wrapped_axis_distance(x % n, y % n, n);
                x /= n;
                y /= n;
                if (d == 1) {
                    ++ones;
                } else if (d != 0) {
                    return false;
                }
            }
            return ones == 2;
        };
        std::vector<std::vector<std::int64_t>> partners(static_cast<std::size_t>(nv));
        for (std::int64_t v = 0; v < nv; ++v) {
            for (const auto& [j, ej] : adj[static_cast<std::size_t>(v)]) {
                for (const auto& [k2, ek] : adj[static_cast<std::size_t>(j)]) {
                    if (k2 == v) continue;
                    if (diagonal_only && !is_diagonal(v, k2)) continue;
                    partners[static_cast<std::size_t>(v)].push_back(k2);
                }
            }
        }
        for (std::int64_t v = 0; v < nv; ++v) {
            t3_offsets_[static_cast<std::size_t>(v + 1)] =
                t3_offsets_[static_cast<std::size_t>(v)] +
                static_cast<std::int64_t>(partners[static_cast<std::size_t>(v)].size());
        }
        t3_partner_.resize(static_cast<std::size_t>(t3_offsets_.back()));
        for (std::int64_t v = 0; v < nv; ++v) {
            std::int64_t at = t3_offsets_[static_cast<std::size_t>(v)];
            for (auto k2 : partners[static_cast<std::size_t>(v)]) {
                t3_partner_[static_cast<std::size_t>(at++)] = k2;
            }
        }
    }

    // iid fair-coin start on the admissible sites.
    cells_.assign(static_cast<std::size_t>(nv), 0);
    const bool clamped = shape_.boundary == BoundaryMode::zero_clamped;
    for (std::int64_t v = 0; v < nv; ++v) {
        if (clamped && shape_.is_boundary_site(v)) continue;
        admissible_.push_back(v);
        cells_[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(rng_.next() >> 63);
        t1_ += cells_[static_cast<std::size_t>(v)];
    }
}

double BoltzmannSampler::flip_log_ratio(std::int64_t site) const {
    const bool was = cells_[static_cast<std::size_t>(site)] != 0;
    const double dy = was ? -1.0 : 1.0;

    double logr = 0.0;
    if (model_.non_homogeneous()) {
        if (!model_.vertex_alphas.empty()) {
            logr += model_.vertex_alphas[static_cast<std::size_t>(site)] * dy;
        } else {
            logr += model_.alpha * dy;
        }
        for (std::int64_t i = offsets_[static_cast<std::size_t>(site)];
             i < offsets_[static_cast<std::size_t>(site + 1)]; ++i) {
            const bool nb = cells_[static_cast<std::size_t>(nbr_site_[static_cast<std::size_t>(i)])] != 0;
            const double delta_edge = (was == nb) ? 1.0 : -1.0; // disagreement created or removed
            const double beta = model_.edge_betas.empty()
                                    ? model_.beta
                                    : model_.edge_betas[static_cast<std::size_t>(
                                          nbr_edge_[static_cast<std::size_t>(i)])];
            logr += beta * delta_edge;
        }
        return logr;
    }

    logr += model_.alpha * dy;
    if (model_.beta != 0.0) {
        std::int64_t delta_t2 = 0;
        for (std::int64_t i = offsets_[static_cast<std::size_t>(site)];
             i < offsets_[static_cast<std::size_t>(site + 1)]; ++i) {
            const bool nb = cells_[static_cast<std::size_t>(nbr_site_[static_cast<std::size_t>(i)])] != 0;
            delta_t2 += (was == nb) ? 1 : -1;
        }
        logr += model_.beta * static_cast<double>(delta_t2);
    }
    if (model_.gamma != 0.0) {
        switch (model_.t3_kind) {
            case T3Kind::none:
                break;
            case T3Kind::overall_parity: {
                const std::int64_t t1_next = t1_ + (was ? -1 : 1);
                logr += model_.gamma * ((t1_next % 2 == 0 ? 1.0 : 0.0) -
                                        (t1_ % 2 == 0 ? 1.0 : 0.0));
                break;
            }
            case T3Kind::second_nearest:
            case T3Kind::diagonal: {
                std::int64_t delta_t3 = 0;
                for (std::int64_t i = t3_offsets_[static_cast<std::size_t>(site)];
                     i < t3_offsets_[static_cast<std::size_t>(site + 1)]; ++i) {
                    const bool pk =
                        cells_[static_cast<std::size_t>(t3_partner_[static_cast<std::size_t>(i)])] != 0;
                    delta_t3 += (was == pk) ? 1 : -1;
                }
                logr += model_.gamma * static_cast<double>(delta_t3);
                break;
            }
        }
    }
    return logr;
}

bool BoltzmannSampler::step() {
    if (admissible_.empty()) return false;
    const std::int64_t site =
        admissible_[static_cast<std::size_t>(rng_.uniform_below(
            static_cast<std::int64_t>(admissible_.size())))];
    const double logr = flip_log_ratio(site);
    if (logr >= 0.0 || rng_.uniform() < std::exp(logr)) {
        const bool was = cells_[static_cast<std::size_t>(site)] != 0;
        cells_[static_cast<std::size_t>(site)] = was ? 0 : 1;
        t1_ += was ? -1 : 1;
        return true;
    }
    return false;
}

void BoltzmannSampler::sweep() {
    const auto n = static_cast<std::int64_t>(admissible_.size());
    for (std::int64_t i = 0; i < n; ++i) step();
}

Configuration BoltzmannSampler::configuration() const {
    return Configuration(shape_, cells_);
}

Configuration generate_boltzmann(const BoltzmannModel& model, const LatticeShape& shape,
                                 std::int64_t steps, std::uint64_t seed) {
    BoltzmannSampler sampler(model, shape, seed);
    for (std::int64_t s = 0; s < steps; ++s) sampler.step();
    return sampler.configuration();
}

} // namespace isinggof
