#include "isinggof/inference.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

namespace isinggof {

double mc_pvalue(double observed, const std::vector<double>& samples, Sidedness sided) {
    if (samples.empty()) throw ValidationError("mc_pvalue needs at least one sample");
    const auto n = static_cast<double>(samples.size());
    std::int64_t ge = 0;
    std::int64_t le = 0;
    for (double s : samples) {
        if (s >= observed) ++ge;
        if (s <= observed) ++le;
    }
    const double upper = (1.0 + static_cast<double>(ge)) / (1.0 + n);
    const double lower = (1.0 + static_cast<double>(le)) / (1.0 + n);
    switch (sided) {
        case Sidedness::upper:
            return upper;
        case Sidedness::lower:
            return lower;
        case Sidedness::two_sided:
            return std::min(1.0, 2.0 * std::min(lower, upper));
    }
    throw ValidationError("unknown sidedness");
}

PosteriorSummary posterior_summary(const std::vector<double>& samples) {
    if (samples.size() < 2) throw ValidationError("posterior summary needs at least 2 samples");
    PosteriorSummary out;
    out.n = static_cast<std::int64_t>(samples.size());

    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(out.n);
    double ss = 0.0;
    for (double s : samples) ss += (s - mean) * (s - mean);
    out.mean = mean;
    out.sd = std::sqrt(ss / static_cast<double>(out.n - 1));

    std::vector<double> sorted(samples);
    std::sort(sorted.begin(), sorted.end());
    for (double level : {0.025, 0.05, 0.5, 0.95, 0.975}) {
        auto rank = static_cast<std::int64_t>(
            std::ceil(level * static_cast<double>(out.n)));
        rank = std::clamp<std::int64_t>(rank, 1, out.n);
        out.quantiles.emplace_back(level, sorted[static_cast<std::size_t>(rank - 1)]);
    }
    return out;
}

double gelman_rubin(const std::vector<std::vector<double>>& chains) {
    if (chains.size() < 2) throw ValidationError("gelman_rubin needs at least 2 chains");
    std::size_t len = chains.front().size();
    for (const auto& c : chains) len = std::min(len, c.size());
    if (len < 4) throw ValidationError("gelman_rubin needs chains of length >= 4");

    const std::size_t half = len / 2;
    std::vector<std::pair<double, double>> halves; // (mean, variance) per half
    for (const auto& chain : chains) {
        for (int part = 0; part < 2; ++part) {
            const std::size_t begin = part == 0 ? 0 : half;
            const std::size_t end = part == 0 ? half : 2 * half;
            double mean = 0.0;
            for (std::size_t i = begin; i < end; ++i) mean += chain[i];
            mean /= static_cast<double>(half);
            double var = 0.0;
            for (std::size_t i = begin; i < end; ++i) {
                var += (chain[i] - mean) * (chain[i] - mean);
            }
            var /= static_cast<double>(half - 1);
            halves.emplace_back(mean, var);
        }
    }

    const auto m = static_cast<double>(halves.size());
    const auto l = static_cast<double>(half);
    double w = 0.0;
    double grand = 0.0;
    for (const auto& [mu, var] : halves) {
        w += var;
        grand += mu;
    }
    w /= m;
    grand /= m;
    double b_over_l = 0.0;
    for (const auto& [mu, var] : halves) b_over_l += (mu - grand) * (mu - grand);
    b_over_l /= (m - 1.0);

    if (w <= 1e-24 * (grand * grand + 1.0)) return std::numeric_limits<double>::infinity();
    const double var_hat = (l - 1.0) / l * w + b_over_l;
    return std::sqrt(var_hat / w);
}

AutocorrResult autocorrelation(const std::vector<double>& series, int max_lag) {
    const auto n = static_cast<std::int64_t>(series.size());
    if (n <= max_lag) throw ValidationError("series must be longer than max_lag");
    AutocorrResult out;
    double mean = 0.0;
    for (double s : series) mean += s;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double s : series) var += (s - mean) * (s - mean);
    // Relative threshold: a nominally constant series accumulates rounding
    // noise of order (eps*mean)^2 per term, which must still count as
    // degenerate.
    if (var <= 1e-24 * static_cast<double>(n) * (mean * mean + 1.0)) {
        out.degenerate = true;
        for (int lag = 1; lag <= max_lag; ++lag) out.values.emplace_back(lag, 0.0);
        return out;
    }
    for (int lag = 1; lag <= max_lag; ++lag) {
        double cov = 0.0;
        for (std::int64_t i = 0; i + lag < n; ++i) {
            cov += (series[static_cast<std::size_t>(i)] - mean) *
                   (series[static_cast<std::size_t>(i + lag)] - mean);
        }
        out.values.emplace_back(lag, cov / var);
    }
    return out;
}

double effective_sample_size(const std::vector<double>& series) {
    const auto n = static_cast<std::int64_t>(series.size());
    if (n < 4) return static_cast<double>(n);
    const int max_lag = static_cast<int>(std::min<std::int64_t>(n - 1, n / 2));
    const AutocorrResult ac = autocorrelation(series, max_lag);
    if (ac.degenerate) return 0.0;
    double acc = 0.0;
    for (const auto& [lag, rho] : ac.values) {
        if (rho <= 0.0) break; // initial positive sequence
        acc += rho;
    }
    return static_cast<double>(n) / (1.0 + 2.0 * acc);
}

TestReport run_test(const Configuration& observed, const std::vector<StatDescriptor>& descriptors,
                    const ChainSettings& settings, int n_chains, int n_threads) {
    if (n_chains < 1) throw ValidationError("run_test needs at least one chain");
    if (descriptors.empty()) throw ValidationError("run_test needs at least one statistic");

    ChainSettings base = settings;
    base.target = observed.fiber();
    base.validate();

    const std::size_t n_stats = descriptors.size();
    // series[c][i] = values of descriptor i along chain c
    std::vector<std::vector<std::vector<double>>> series(
        static_cast<std::size_t>(n_chains), std::vector<std::vector<double>>(n_stats));
    std::vector<std::vector<std::int64_t>> record_steps(static_cast<std::size_t>(n_chains));
    std::vector<ChainInfo> chain_infos(static_cast<std::size_t>(n_chains));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_chains));

    auto run_one = [&](int c) {
        try {
            ChainSettings mine = base;
            mine.seed = derive_stream(base.seed, static_cast<std::uint64_t>(c));
            mine.record_policy = RecordPolicy::on_fiber_only;
            mine.store_configurations = false;
            auto sink = [&](const Configuration& state, std::int64_t step) {
                record_steps[static_cast<std::size_t>(c)].push_back(step);
                for (std::size_t i = 0; i < n_stats; ++i) {
                    const std::uint64_t eval_seed =
                        derive_stream(base.seed, 0x7374617473ULL, static_cast<std::uint64_t>(c),
                                      static_cast<std::uint64_t>(step));
                    series[static_cast<std::size_t>(c)][i].push_back(
                        evaluate(state, descriptors[i], derive_stream(eval_seed, i)));
                }
            };
            const ChainRun run = run_chain(observed, mine, sink);
            chain_infos[static_cast<std::size_t>(c)] = {run.acceptance_rate, run.on_fiber_fraction,
                                                        run.recorded_count};
        } catch (...) {
            errors[static_cast<std::size_t>(c)] = std::current_exception();
        }
    };

    int pool = n_threads > 0 ? n_threads : static_cast<int>(std::thread::hardware_concurrency());
    pool = std::clamp(pool, 1, n_chains);
    if (pool == 1) {
        for (int c = 0; c < n_chains; ++c) run_one(c);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(pool));
        for (int t = 0; t < pool; ++t) {
            workers.emplace_back([&]() {
                for (;;) {
                    const int c = next.fetch_add(1);
                    if (c >= n_chains) return;
                    run_one(c);
                }
            });
        }
        for (auto& w : workers) w.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    for (int c = 0; c < n_chains; ++c) {
        if (chain_infos[static_cast<std::size_t>(c)].recorded < 100) {
            throw UnderSampledError(
                c, "chain " + std::to_string(c) + " recorded only " +
                       std::to_string(chain_infos[static_cast<std::size_t>(c)].recorded) +
                       " on-fiber samples (need >= 100); the chain may be frozen or the "
                       "run too short");
        }
    }

    TestReport report;
    report.fiber = base.target;
    report.chains = chain_infos;
    report.series = series;
    report.record_steps = record_steps;

    for (std::size_t i = 0; i < n_stats; ++i) {
        StatReport sr;
        sr.name = descriptors[i].name;
        sr.sided = descriptors[i].sided;
        sr.observed = evaluate(observed, descriptors[i],
                               derive_stream(base.seed, 0x6f627365ULL, i));

        std::vector<double> pooled;
        std::vector<std::vector<double>> per_chain;
        for (int c = 0; c < n_chains; ++c) {
            const auto& vals = series[static_cast<std::size_t>(c)][i];
            pooled.insert(pooled.end(), vals.begin(), vals.end());
            per_chain.push_back(vals);
        }
        sr.posterior = posterior_summary(pooled);
        sr.p_value = mc_pvalue(sr.observed, pooled, sr.sided);
        if (n_chains >= 2) {
            sr.diagnostics.psrf = gelman_rubin(per_chain);
        } else {
            sr.diagnostics.psrf = 1.0;
        }
        const auto& first = per_chain.front();
        const int max_lag =
            static_cast<int>(std::min<std::int64_t>(50, static_cast<std::int64_t>(first.size()) / 4));
        if (max_lag >= 1) sr.diagnostics.autocorr = autocorrelation(first, max_lag);
        double ess = 0.0;
        for (const auto& chain_vals : per_chain) ess += effective_sample_size(chain_vals);
        sr.diagnostics.ess = ess;
        report.pooled_samples = static_cast<std::int64_t>(pooled.size());
        report.statistics.push_back(std::move(sr));
    }
    return report;
}

} // namespace isinggof
