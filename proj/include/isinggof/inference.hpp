#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isinggof/sampler.hpp"
#include "isinggof/statistics.hpp"

namespace isinggof {

/// Monte Carlo p-value with the +1 correction, so a valid test never
/// reports zero. Ties count as at least as extreme.
///   upper:     (1 + #{s >= observed}) / (1 + n)
///   lower:     (1 + #{s <= observed}) / (1 + n)
///   two_sided: min(1, 2 * min(lower, upper))
double mc_pvalue(double observed, const std::vector<double>& samples, Sidedness sided);

struct PosteriorSummary {
    double mean = 0.0;
    double sd = 0.0;
    // (level, value) for levels {0.025, 0.05, 0.5, 0.95, 0.975}
    std::vector<std::pair<double, double>> quantiles;
    std::int64_t n = 0;
};

/// Sample mean, sd (n-1 denominator) and nearest-rank empirical quantiles:
/// value at index ceil(p*n) - 1 of the sorted sample. Needs n >= 2.
PosteriorSummary posterior_summary(const std::vector<double>& samples);

/// Split-half potential scale reduction factor: each chain is halved, W is
/// the mean within-half variance, B the between-half-mean variance times the
/// half length L, and R-hat = sqrt(((L-1)/L * W + B/L) / W). Returns +inf
/// when the within variance is zero (degenerate chains). Chains are
/// truncated to the shortest length; needs at least 2 chains of length 4.
double gelman_rubin(const std::vector<std::vector<double>>& chains);

struct AutocorrResult {
    std::vector<std::pair<int, double>> values; // (lag, correlation), lags 1..max_lag
    bool degenerate = false;                    // zero variance; values reported as 0
};

/// Biased autocovariance estimator normalized by lag 0. Needs
/// series.size() > max_lag.
AutocorrResult autocorrelation(const std::vector<double>& series, int max_lag);

/// n / (1 + 2 * sum of leading positive autocorrelations).
double effective_sample_size(const std::vector<double>& series);

struct Diagnostics {
    double psrf = 1.0; // +inf flags zero within-chain variance
    double ess = 0.0;  // summed over chains
    AutocorrResult autocorr; // of the first chain's series
};

struct StatReport {
    std::string name;
    Sidedness sided = Sidedness::two_sided;
    double observed = 0.0;
    double p_value = 1.0;
    PosteriorSummary posterior;
    Diagnostics diagnostics;
};

struct ChainInfo {
    double acceptance_rate = 0.0;
    double on_fiber_fraction = 0.0;
    std::int64_t recorded = 0;
};

struct TestReport {
    FiberId fiber;
    std::int64_t pooled_samples = 0;
    std::vector<StatReport> statistics;
    std::vector<ChainInfo> chains;
    // raw evaluation series, series[chain][statistic][record]
    std::vector<std::vector<std::vector<double>>> series;
    // chain step number of each record (same for every statistic)
    std::vector<std::vector<std::int64_t>> record_steps;
};

/// The full conditional test: n_chains swap chains start from the observed
/// configuration (whose sufficient statistics determine the fiber); the
/// post-burn-in, thinned, on-fiber states are evaluated under every
/// descriptor and pooled in chain order. Each chain uses the stream derived
/// from (settings.seed, chain index); descriptor evaluations derive theirs
/// from (seed, chain, step), so reports are bit-reproducible. Throws
/// UnderSampledError if any chain records fewer than 100 on-fiber samples.
/// n_threads <= 0 picks the hardware count.
TestReport run_test(const Configuration& observed, const std::vector<StatDescriptor>& descriptors,
                    const ChainSettings& settings, int n_chains, int n_threads = 0);

} // namespace isinggof
