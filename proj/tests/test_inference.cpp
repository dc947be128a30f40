#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "isinggof/inference.hpp"
#include "isinggof/rng.hpp"
#include "support.hpp"

using namespace isinggof;

TEST_CASE("mc_pvalue reference values") {
    std::vector<double> samples;
    for (int i = 1; i <= 99; ++i) samples.push_back(i);

    CHECK(mc_pvalue(0.5, samples, Sidedness::upper) == doctest::Approx(1.0));
    CHECK(mc_pvalue(1000.0, samples, Sidedness::upper) == doctest::Approx(0.01));
    CHECK(mc_pvalue(-1000.0, samples, Sidedness::lower) == doctest::Approx(0.01));

    std::vector<double> sym;
    for (int i = -499; i <= 499; ++i) sym.push_back(i);
    CHECK(mc_pvalue(0.0, sym, Sidedness::two_sided) == doctest::Approx(1.0));

    CHECK_THROWS_AS(mc_pvalue(0.0, {}, Sidedness::upper), ValidationError);
}

TEST_CASE("mc_pvalue bounds and monotonicity") {
    Rng rng(808);
    std::vector<double> samples;
    for (int i = 0; i < 500; ++i) samples.push_back(rng.normal());
    double prev = 1.0;
    for (double obs = -4.0; obs <= 4.0; obs += 0.05) {
        const double p = mc_pvalue(obs, samples, Sidedness::upper);
        CHECK(p > 0.0);
        CHECK(p <= 1.0);
        CHECK(p <= prev + 1e-12);
        prev = p;
    }
}

TEST_CASE("posterior_summary") {
    const auto s = posterior_summary({1, 2, 3, 4, 5});
    CHECK(s.mean == doctest::Approx(3.0));
    CHECK(s.sd == doctest::Approx(std::sqrt(2.5)));
    CHECK(s.n == 5);
    CHECK(s.quantiles[2].second == doctest::Approx(3.0)); // median
    CHECK(s.quantiles[0].second == doctest::Approx(1.0));
    CHECK(s.quantiles[4].second == doctest::Approx(5.0));

    const auto flat = posterior_summary({2.5, 2.5, 2.5});
    CHECK(flat.sd == 0.0);
    for (const auto& [level, value] : flat.quantiles) CHECK(value == 2.5);

    CHECK_THROWS_AS(posterior_summary({1.0}), ValidationError);

    Rng rng(6021023);
    std::vector<double> normals;
    for (int i = 0; i < 100000; ++i) normals.push_back(rng.normal());
    const auto big = posterior_summary(normals);
    CHECK(std::fabs(big.mean) < 0.02);
    CHECK(std::fabs(big.sd - 1.0) < 0.02);
    // quantile levels must be non-decreasing in value
    for (std::size_t i = 1; i < big.quantiles.size(); ++i) {
        CHECK(big.quantiles[i].second >= big.quantiles[i - 1].second);
    }
}

TEST_CASE("gelman_rubin") {
    Rng rng(123456);
    std::vector<std::vector<double>> chains(4);
    for (auto& chain : chains) {
        for (int i = 0; i < 10000; ++i) chain.push_back(rng.normal());
    }
    const double rhat = gelman_rubin(chains);
    CHECK(rhat >= 1.0 - 1e-9);
    CHECK(rhat <= 1.1);

    // affine transform invariance
    std::vector<std::vector<double>> scaled = chains;
    for (auto& chain : scaled) {
        for (auto& x : chain) x = -3.75 * x + 11.0;
    }
    CHECK(std::fabs(gelman_rubin(scaled) - rhat) < 1e-9);

    // two constant chains at different values: zero within-variance
    CHECK(std::isinf(gelman_rubin({{1, 1, 1, 1}, {2, 2, 2, 2}})));

    CHECK_THROWS_AS(gelman_rubin({{1, 2, 3, 4}}), ValidationError);
    CHECK_THROWS_AS(gelman_rubin({{1, 2}, {1, 2}}), ValidationError);
}

TEST_CASE("gelman_rubin cross-checked against a direct reference") {
    // independent straightforward implementation on the same numbers
    auto reference = [](const std::vector<std::vector<double>>& chains) {
        std::vector<std::vector<long double>> halves;
        std::size_t len = chains.front().size();
        for (const auto& c : chains) len = std::min(len, c.size());
        const std::size_t half = len / 2;
        for (const auto& c : chains) {
            halves.emplace_back(c.begin(), c.begin() + half);
            halves.emplace_back(c.begin() + half, c.begin() + 2 * half);
        }
        const auto m = static_cast<long double>(halves.size());
        const auto l = static_cast<long double>(half);
        std::vector<long double> means;
        long double w = 0;
        for (const auto& h : halves) {
            long double mu = 0;
            for (auto x : h) mu += x;
            mu /= l;
            means.push_back(mu);
            long double var = 0;
            for (auto x : h) var += (x - mu) * (x - mu);
            w += var / (l - 1);
        }
        w /= m;
        long double grand = 0;
        for (auto mu : means) grand += mu;
        grand /= m;
        long double b = 0;
        for (auto mu : means) b += (mu - grand) * (mu - grand);
        b = b * l / (m - 1);
        return static_cast<double>(std::sqrt(((l - 1) / l * w + b / l) / w));
    };

    Rng rng(777);
    std::vector<double> one;
    for (int i = 0; i < 5000; ++i) one.push_back(rng.normal() * 2.0 + rng.uniform());
    const std::vector<std::vector<double>> chains{one, one};
    CHECK(std::fabs(gelman_rubin(chains) - reference(chains)) < 1e-6);
}

TEST_CASE("autocorrelation") {
    std::vector<double> constant(100, 3.14);
    const auto flat = autocorrelation(constant, 5);
    CHECK(flat.degenerate);
    for (const auto& [lag, value] : flat.values) CHECK(value == 0.0);

    std::vector<double> alternating;
    for (int i = 0; i < 1000; ++i) alternating.push_back(i % 2 ? 1.0 : -1.0);
    const auto alt = autocorrelation(alternating, 3);
    CHECK(!alt.degenerate);
    CHECK(alt.values[0].second == doctest::Approx(-1.0).epsilon(0.01));
    CHECK(alt.values[1].second == doctest::Approx(1.0).epsilon(0.01));

    Rng rng(31);
    std::vector<double> noise;
    for (int i = 0; i < 100000; ++i) noise.push_back(rng.normal());
    const auto iid = autocorrelation(noise, 3);
    CHECK(std::fabs(iid.values[0].second) < 0.01);
    for (const auto& [lag, value] : iid.values) CHECK(std::fabs(value) <= 1.0);

    CHECK_THROWS_AS(autocorrelation({1, 2, 3}, 5), ValidationError);
}

TEST_CASE("effective sample size") {
    Rng rng(9);
    std::vector<double> noise;
    for (int i = 0; i < 20000; ++i) noise.push_back(rng.normal());
    const double ess = effective_sample_size(noise);
    CHECK(ess > 15000.0);
    CHECK(ess <= 21000.0);

    CHECK(effective_sample_size(std::vector<double>(100, 1.0)) == 0.0);

    // strongly autocorrelated walkish series has a much smaller ess
    std::vector<double> walk{0.0};
    for (int i = 1; i < 20000; ++i) walk.push_back(0.99 * walk.back() + rng.normal());
    CHECK(effective_sample_size(walk) < 2000.0);
}

namespace {

ChainSettings quick_settings(FiberId target, std::uint64_t seed) {
    ChainSettings s;
    s.target = target;
    s.steps = 30000;
    s.burn_in = 2000;
    s.thinning = 10;
    s.seed = seed;
    return s;
}

} // namespace

TEST_CASE("run_test produces a deterministic report") {
    const auto observed = testsupport::example_5x5();
    const auto descriptors = default_descriptors({20, 2, 5});
    const auto settings = quick_settings(observed.fiber(), 33);

    const auto r1 = run_test(observed, descriptors, settings, 3, 2);
    const auto r2 = run_test(observed, descriptors, settings, 3, 3);
    REQUIRE(r1.statistics.size() == 6);
    CHECK(r1.fiber == FiberId{6, 18});
    CHECK(r1.pooled_samples == r2.pooled_samples);
    for (std::size_t i = 0; i < r1.statistics.size(); ++i) {
        CHECK(r1.statistics[i].p_value == r2.statistics[i].p_value);
        CHECK(r1.statistics[i].observed == r2.statistics[i].observed);
        CHECK(r1.statistics[i].posterior.mean == r2.statistics[i].posterior.mean);
        CHECK(r1.statistics[i].posterior.sd == r2.statistics[i].posterior.sd);
        CHECK(r1.statistics[i].diagnostics.psrf == r2.statistics[i].diagnostics.psrf);
        CHECK(r1.statistics[i].p_value > 0.0);
        CHECK(r1.statistics[i].p_value <= 1.0);
    }
    for (const auto& chain : r1.chains) {
        CHECK(chain.recorded >= 100);
        CHECK(chain.on_fiber_fraction > 0.0);
    }
}

TEST_CASE("run_test under-sampling error names the chain") {
    const auto observed = testsupport::example_5x5();
    const auto descriptors = default_descriptors({10, 2, 5});
    ChainSettings settings = quick_settings(observed.fiber(), 2);
    settings.steps = 300; // far too short to record 100 samples
    settings.burn_in = 100;
    try {
        run_test(observed, descriptors, settings, 2, 1);
        FAIL("expected UnderSampledError");
    } catch (const UnderSampledError& e) {
        CHECK(e.chain_index >= 0);
        CHECK(std::string(e.what()).find("chain") != std::string::npos);
    }
}

TEST_CASE("a frozen strict chain yields degenerate diagnostics") {
    const auto block = testsupport::block_2x2(6, 8, 2, 2);
    std::vector<StatDescriptor> descriptors;
    descriptors.push_back({StatDescriptor::Kind::motif_count, "adjacent",
                           default_adjacent_motif(), {}, Sidedness::two_sided});
    ChainSettings settings = quick_settings(block.fiber(), 4);
    settings.mode = ChainMode::strict;
    const auto report = run_test(block, descriptors, settings, 2, 1);
    CHECK(std::isinf(report.statistics[0].diagnostics.psrf));
    CHECK(report.statistics[0].posterior.sd == 0.0);
    CHECK(report.statistics[0].diagnostics.autocorr.degenerate);
}
