// ising-gof: exact goodness-of-fit testing for the finite-lattice Ising
// model from a single observed binary configuration.
//
// Exit codes: 0 success (test: null not rejected), 1 usage error,
// 2 null hypothesis rejected at the chosen significance level,
// 3 sampling failure (frozen or under-sampled chains), 4 I/O error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "isinggof/digest.hpp"
#include "isinggof/grid_io.hpp"
#include "isinggof/inference.hpp"
#include "isinggof/oracle.hpp"
#include "isinggof/sampler.hpp"
#include "isinggof/statistics.hpp"
#include "isinggof/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace isinggof;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRejected = 2;
constexpr int kExitSampling = 3;
constexpr int kExitIo = 4;

std::vector<std::int64_t> parse_size(const std::string& text) {
    std::vector<std::int64_t> dims;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, 'x')) {
        try {
            dims.push_back(std::stoll(part));
        } catch (const std::exception&) {
            throw ValidationError("cannot parse lattice size '" + text + "'");
        }
    }
    if (dims.empty()) throw ValidationError("empty lattice size");
    return dims;
}

FiberId parse_fiber(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw ValidationError("fiber must be given as a,b");
    try {
        return {std::stoll(text.substr(0, comma)), std::stoll(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw ValidationError("cannot parse fiber '" + text + "'");
    }
}

BoundaryMode parse_boundary(const std::string& text) {
    if (text == "free") return BoundaryMode::free;
    if (text == "zero_clamped") return BoundaryMode::zero_clamped;
    throw ValidationError("boundary must be 'free' or 'zero_clamped'");
}

GridFormat parse_format(const std::string& text) {
    if (text == "auto") return GridFormat::auto_detect;
    if (text == "text") return GridFormat::text;
    if (text == "csv") return GridFormat::csv;
    if (text == "pgm") return GridFormat::pgm;
    throw ValidationError("format must be auto, text, csv or pgm");
}

/// Seed precedence: an explicit --seed flag wins, then ISING_GOF_SEED,
/// then the built-in default.
std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t flag_value) {
    if (seed_opt->count() > 0) return flag_value;
    if (const char* env = std::getenv("ISING_GOF_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ValidationError("ISING_GOF_SEED is not an integer");
        }
    }
    return flag_value;
}

std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string sided_name(Sidedness s) {
    switch (s) {
        case Sidedness::lower:
            return "lower";
        case Sidedness::upper:
            return "upper";
        case Sidedness::two_sided:
            return "two_sided";
    }
    return "?";
}

json summary_to_json(const PosteriorSummary& s) {
    json q = json::object();
    for (const auto& [level, value] : s.quantiles) {
        std::ostringstream key;
        key << level;
        q[key.str()] = value;
    }
    return {{"mean", s.mean}, {"sd", s.sd}, {"n", s.n}, {"quantiles", q}};
}

json diagnostics_to_json(const Diagnostics& d) {
    json ac = json::array();
    for (const auto& [lag, value] : d.autocorr.values) ac.push_back({lag, value});
    return {{"psrf", std::isinf(d.psrf) ? json("inf") : json(d.psrf)},
            {"ess", d.ess},
            {"autocorrelation", ac},
            {"degenerate", d.autocorr.degenerate}};
}

std::vector<StatDescriptor> build_descriptors(const std::string& stats_csv,
                                              const std::string& motif_file, std::int64_t pairs,
                                              std::int64_t window, std::uint64_t seed) {
    const SubtableScheme scheme{pairs, window, derive_stream(seed, 0x736368656dULL)};
    std::map<std::string, StatDescriptor> catalog;
    for (auto& d : default_descriptors(scheme)) {
        std::string key = d.name;
        if (key.ends_with("_pairs")) key = key.substr(0, key.size() - 6);
        std::transform(key.begin(), key.end(), key.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        catalog.emplace(key, std::move(d));
    }

    std::vector<StatDescriptor> out;
    std::stringstream ss(stats_csv);
    std::string name;
    while (std::getline(ss, name, ',')) {
        if (name.empty()) continue;
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        auto it = catalog.find(name);
        if (it == catalog.end()) {
            throw ValidationError("unknown statistic '" + name +
                                  "' (use diagonal, adjacent, consecutive, dt1, dt2, dt12)");
        }
        out.push_back(it->second);
    }
    if (!motif_file.empty()) {
        std::ifstream in(motif_file);
        if (!in) throw ParseError("cannot open motif file '" + motif_file + "'");
        for (auto& [motif_name, motif] : parse_motif_file(in)) {
            StatDescriptor d;
            d.kind = StatDescriptor::Kind::motif_count;
            d.name = motif_name;
            d.motif = std::move(motif);
            d.scheme = scheme;
            d.sided = Sidedness::two_sided;
            out.push_back(std::move(d));
        }
    }
    if (out.empty()) throw ValidationError("no statistics selected");
    return out;
}

json manifest_json(const std::string& command, const std::vector<std::string>& argv,
                   const std::string& input_path, const json& settings) {
    json m;
    m["tool"] = "ising-gof";
    m["version"] = kVersion;
    m["command"] = command;
    m["argv"] = argv;
    if (!input_path.empty()) {
        m["input"] = {{"path", input_path}, {"sha256", sha256_hex(read_file_bytes(input_path))}};
    }
    m["settings"] = settings;
    return m;
}

void write_text_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + path.string() + "' for writing");
    out << contents;
    if (!out) throw ParseError("write to '" + path.string() + "' failed");
}

std::string format_double(double v) {
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

// ---------------------------------------------------------------- stats --

int cmd_stats(const std::string& input, const GridReadOptions& options) {
    const auto config = read_grid(input, options);
    std::cout << "T1=" << config.t1() << " T2=" << config.t2() << "\n";
    const auto census = connected_components(config);
    auto sizes = census.sizes();
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    std::cout << "components=" << sizes.size() << " singletons=" << census.singleton_count()
              << " sizes=";
    for (std::size_t i = 0; i < sizes.size(); ++i) std::cout << (i ? "," : "") << sizes[i];
    std::cout << "\n";
    return kExitOk;
}

// ----------------------------------------------------------------- test --

struct TestOptions {
    int chains = 3;
    std::int64_t steps = 100000;
    std::int64_t burn_in = 10000;
    std::int64_t thinning = 10;
    std::uint64_t seed = 0;
    std::string mode = "expanded";
    std::string stats = "diagonal,adjacent,consecutive,dt1,dt2,dt12";
    std::string motif_file;
    std::int64_t pairs = 100;
    std::int64_t window = 3;
    double alpha = 0.05;
    std::string out_dir = "gof-out";
    int threads = 0;
};

int cmd_test(const std::vector<std::string>& argv, const std::string& input,
             const GridReadOptions& read_options, const TestOptions& opt) {
    if (opt.mode != "expanded" && opt.mode != "strict") {
        throw ValidationError("mode must be expanded or strict");
    }
    const auto observed = read_grid(input, read_options);
    const auto descriptors =
        build_descriptors(opt.stats, opt.motif_file, opt.pairs, opt.window, opt.seed);

    ChainSettings settings;
    settings.mode = opt.mode == "strict" ? ChainMode::strict : ChainMode::expanded;
    settings.target = observed.fiber();
    settings.steps = opt.steps;
    settings.burn_in = opt.burn_in;
    settings.thinning = opt.thinning;
    settings.seed = opt.seed;

    const auto clock_start = std::chrono::steady_clock::now();
    const TestReport report = run_test(observed, descriptors, settings, opt.chains, opt.threads);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();

    fs::create_directories(opt.out_dir);

    const json settings_json = {
        {"input", input},
        {"mode", opt.mode},
        {"chains", opt.chains},
        {"steps", opt.steps},
        {"burn_in", opt.burn_in},
        {"thinning", opt.thinning},
        {"seed", opt.seed},
        {"statistics", opt.stats},
        {"motif_file", opt.motif_file},
        {"subtable_pairs", opt.pairs},
        {"subtable_window", opt.window},
        {"alpha", opt.alpha},
        {"boundary", read_options.boundary == BoundaryMode::free ? "free" : "zero_clamped"},
        {"threshold", read_options.threshold},
    };

    bool rejected = false;
    json stats_json = json::array();
    for (const auto& s : report.statistics) {
        if (s.p_value < opt.alpha) rejected = true;
        stats_json.push_back({{"name", s.name},
                              {"observed", s.observed},
                              {"p_value", s.p_value},
                              {"sided", sided_name(s.sided)},
                              {"posterior", summary_to_json(s.posterior)},
                              {"diagnostics", diagnostics_to_json(s.diagnostics)}});
    }
    json chains_json = json::array();
    for (const auto& c : report.chains) {
        chains_json.push_back({{"acceptance_rate", c.acceptance_rate},
                               {"on_fiber_fraction", c.on_fiber_fraction},
                               {"recorded", c.recorded}});
    }
    const json report_json = {
        {"version", kVersion},
        {"fiber", {{"a", report.fiber.a}, {"b", report.fiber.b}}},
        {"pooled_samples", report.pooled_samples},
        {"alpha", opt.alpha},
        {"rejected", rejected},
        {"statistics", stats_json},
        {"chains", chains_json},
        {"settings", settings_json},
    };
    write_text_file(fs::path(opt.out_dir) / "report.json", report_json.dump(2) + "\n");

    // long-format posterior samples
    {
        std::ostringstream csv;
        csv << "chain,step";
        for (const auto& d : descriptors) csv << "," << d.name;
        csv << "\n";
        for (std::size_t c = 0; c < report.series.size(); ++c) {
            const auto& chain_series = report.series[c];
            for (std::size_t r = 0; r < report.record_steps[c].size(); ++r) {
                csv << c << "," << report.record_steps[c][r];
                for (std::size_t i = 0; i < chain_series.size(); ++i) {
                    csv << "," << format_double(chain_series[i][r]);
                }
                csv << "\n";
            }
        }
        write_text_file(fs::path(opt.out_dir) / "samples.csv", csv.str());
    }

    // plot-ready histograms: unit bins for narrow integer ranges, 50
    // uniform bins otherwise
    {
        std::ostringstream csv;
        csv << "statistic,bin_lo,bin_hi,count\n";
        for (std::size_t i = 0; i < descriptors.size(); ++i) {
            std::vector<double> pooled;
            for (const auto& chain_series : report.series) {
                pooled.insert(pooled.end(), chain_series[i].begin(), chain_series[i].end());
            }
            if (pooled.empty()) continue;
            const double lo = *std::min_element(pooled.begin(), pooled.end());
            const double hi = *std::max_element(pooled.begin(), pooled.end());
            const bool integral = std::all_of(pooled.begin(), pooled.end(),
                                              [](double v) { return v == std::floor(v); });
            if (integral && hi - lo <= 200) {
                std::map<double, std::int64_t> counts;
                for (double v : pooled) ++counts[v];
                for (const auto& [v, n] : counts) {
                    csv << descriptors[i].name << "," << v << "," << v + 1 << "," << n << "\n";
                }
            } else {
                const int bins = 50;
                const double width = hi > lo ? (hi - lo) / bins : 1.0;
                std::vector<std::int64_t> counts(bins, 0);
                for (double v : pooled) {
                    const int b = std::clamp(static_cast<int>((v - lo) / width), 0, bins - 1);
                    ++counts[static_cast<std::size_t>(b)];
                }
                for (int b = 0; b < bins; ++b) {
                    csv << descriptors[i].name << "," << format_double(lo + b * width) << ","
                        << format_double(lo + (b + 1) * width) << ","
                        << counts[static_cast<std::size_t>(b)] << "\n";
                }
            }
        }
        write_text_file(fs::path(opt.out_dir) / "histograms.csv", csv.str());
    }

    {
        json manifest = manifest_json("test", argv, input, settings_json);
        manifest["elapsed_seconds"] = elapsed;
        write_text_file(fs::path(opt.out_dir) / "manifest.json", manifest.dump(2) + "\n");
    }

    for (const auto& s : report.statistics) {
        std::cout << s.name << ": observed=" << s.observed << " p=" << s.p_value << " ("
                  << sided_name(s.sided) << ")\n";
    }
    std::cout << (rejected ? "REJECT" : "no rejection") << " at alpha=" << opt.alpha << "\n";
    return rejected ? kExitRejected : kExitOk;
}

// ------------------------------------------------------------- generate --

struct GenerateOptions {
    std::string model = "ising";
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    std::string bc = "periodic";
    std::string size = "10x10";
    std::int64_t steps = 10000;
    std::uint64_t seed = 0;
    std::string field_file;
    std::string gradient = "0:1";
    std::string output = "sample.txt";
};

int cmd_generate(const std::vector<std::string>& argv, const GenerateOptions& opt,
                 GridFormat format) {
    const LatticeShape shape(parse_size(opt.size));
    if (shape.dims.size() > 2) throw ValidationError("generate supports 1D and 2D lattices");
    const std::int64_t rows = shape.dims.size() == 2 ? shape.dims[0] : 1;
    const std::int64_t cols = shape.vertex_count() / rows;

    BoltzmannModel model;
    model.boundary = opt.bc == "periodic" ? GeneratorBoundary::periodic : GeneratorBoundary::free;
    if (opt.bc != "periodic" && opt.bc != "free") {
        throw ValidationError("--bc must be periodic or free");
    }
    if (opt.model == "ising") {
        model.alpha = opt.alpha;
        model.beta = opt.beta;
    } else if (opt.model == "diagonal" || opt.model == "second" || opt.model == "overall") {
        model.alpha = opt.alpha;
        model.beta = opt.beta;
        model.gamma = opt.gamma;
        model.t3_kind = opt.model == "diagonal"  ? T3Kind::diagonal
                        : opt.model == "second" ? T3Kind::second_nearest
                                                : T3Kind::overall_parity;
    } else if (opt.model == "vertex") {
        const auto nv = static_cast<std::size_t>(shape.vertex_count());
        model.vertex_alphas.assign(nv, 0.0);
        if (!opt.field_file.empty()) {
            std::ifstream in(opt.field_file);
            if (!in) throw ParseError("cannot open field file '" + opt.field_file + "'");
            std::string line;
            std::vector<double> values;
            long line_no = 0;
            while (std::getline(in, line)) {
                ++line_no;
                if (line.empty()) continue;
                std::stringstream row(line);
                std::string cell;
                while (std::getline(row, cell, ',')) {
                    try {
                        values.push_back(std::stod(cell));
                    } catch (const std::exception&) {
                        throw ParseError("bad field value '" + cell + "'", line_no);
                    }
                }
            }
            if (values.size() != nv) {
                throw ValidationError("field file must hold one value per site");
            }
            // field files are row-major like grids; convert to site order
            for (std::int64_t r = 0; r < rows; ++r) {
                for (std::int64_t c = 0; c < cols; ++c) {
                    model.vertex_alphas[static_cast<std::size_t>(r + c * rows)] =
                        values[static_cast<std::size_t>(r * cols + c)];
                }
            }
        } else {
            double lo = 0.0;
            double hi = 1.0;
            const auto colon = opt.gradient.find(':');
            if (colon == std::string::npos) throw ValidationError("--gradient must be lo:hi");
            try {
                lo = std::stod(opt.gradient.substr(0, colon));
                hi = std::stod(opt.gradient.substr(colon + 1));
            } catch (const std::exception&) {
                throw ValidationError("cannot parse --gradient '" + opt.gradient + "'");
            }
            // linear field along the columns
            for (std::int64_t v = 0; v < shape.vertex_count(); ++v) {
                const std::int64_t c = v / rows;
                model.vertex_alphas[static_cast<std::size_t>(v)] =
                    cols > 1 ? lo + (hi - lo) * static_cast<double>(c) /
                                        static_cast<double>(cols - 1)
                             : lo;
            }
        }
        // homogeneous coupling expressed through the per-edge array
        model.edge_betas.assign(
            static_cast<std::size_t>(generator_edge_count(shape, model.boundary)), opt.beta);
    } else {
        throw ValidationError("model must be ising, diagonal, second, overall or vertex");
    }

    const auto config = generate_boltzmann(model, shape, opt.steps, opt.seed);
    write_grid(config, opt.output, format);

    const json settings = {{"model", opt.model}, {"alpha", opt.alpha}, {"beta", opt.beta},
                           {"gamma", opt.gamma}, {"boundary", opt.bc}, {"size", opt.size},
                           {"steps", opt.steps}, {"seed", opt.seed},   {"output", opt.output},
                           {"field", opt.field_file}, {"gradient", opt.gradient}};
    write_text_file(opt.output + ".manifest.json",
                    manifest_json("generate", argv, "", settings).dump(2) + "\n");
    std::cout << "wrote " << opt.output << " T1=" << config.t1() << " T2=" << config.t2()
              << "\n";
    return kExitOk;
}

// --------------------------------------------------------------- sample --

int cmd_sample(const std::vector<std::string>& argv, const std::string& input,
               const GridReadOptions& read_options, const std::string& mode, std::int64_t steps,
               std::int64_t burn_in, std::int64_t thinning, std::uint64_t seed,
               const std::string& output) {
    if (mode != "expanded" && mode != "strict") {
        throw ValidationError("mode must be expanded or strict");
    }
    const auto start = read_grid(input, read_options);

    ChainSettings settings;
    settings.mode = mode == "strict" ? ChainMode::strict : ChainMode::expanded;
    settings.target = start.fiber();
    settings.steps = steps;
    settings.burn_in = burn_in;
    settings.thinning = thinning;
    settings.seed = seed;
    settings.record_policy = RecordPolicy::all_states;

    std::ostringstream csv;
    csv << "step,t1,t2,on_fiber\n";
    const auto run = run_chain(start, settings, [&](const Configuration& state, std::int64_t step) {
        csv << step << "," << state.t1() << "," << state.t2() << ","
            << (state.t2() == settings.target.b ? 1 : 0) << "\n";
    });
    write_text_file(output, csv.str());

    const json settings_json = {{"input", input},       {"mode", mode},
                                {"steps", steps},       {"burn_in", burn_in},
                                {"thinning", thinning}, {"seed", seed},
                                {"output", output}};
    write_text_file(output + ".manifest.json",
                    manifest_json("sample", argv, input, settings_json).dump(2) + "\n");

    std::cout << "acceptance_rate=" << run.acceptance_rate
              << " on_fiber_fraction=" << run.on_fiber_fraction
              << " recorded=" << run.recorded_count << "\n";
    if (run.acceptance_rate == 0.0) {
        std::cerr << "warning: chain frozen: 0 accepted moves\n";
    }
    return kExitOk;
}

// ------------------------------------------------------------ enumerate --

int cmd_enumerate(const std::string& size, BoundaryMode boundary, const std::string& fiber_text,
                  const std::string& expansions_text, bool degree1, std::int64_t t1_slice) {
    const LatticeShape shape(parse_size(size), boundary);
    if (degree1) {
        std::cout << degree1_move_count(shape) << "\n";
        return kExitOk;
    }
    if (!fiber_text.empty()) {
        const FiberId fiber = parse_fiber(fiber_text);
        const auto states = enumerate_fiber_masks(shape, fiber);
        std::cout << "fiber (" << fiber.a << "," << fiber.b << "): " << states.size()
                  << " states\n";
        if (states.empty()) return kExitOk;
        std::stringstream ss(expansions_text);
        std::string part;
        while (std::getline(ss, part, ',')) {
            std::int64_t e = 0;
            try {
                e = std::stoll(part);
            } catch (const std::exception&) {
                throw ValidationError("bad expansion '" + part + "'");
            }
            const auto comps = swap_graph_components_masks(shape, states, e);
            std::cout << "e=" << e << ": " << comps.size() << " component"
                      << (comps.size() == 1 ? "" : "s") << "\n";
        }
        return kExitOk;
    }
    if (t1_slice >= 0) {
        for (const auto& [t2, states] : enumerate_t1_slice_masks(shape, t1_slice)) {
            std::cout << "fiber (" << t1_slice << "," << t2 << "): " << states.size()
                      << " states\n";
        }
        return kExitOk;
    }
    throw ValidationError("enumerate needs --fiber, --t1 or --degree1-count");
}

// ------------------------------------------------------------- diagnose --

int cmd_diagnose(const std::string& input, int max_lag) {
    std::ifstream in(input);
    if (!in) throw ParseError("cannot open '" + input + "'");
    std::string header;
    if (!std::getline(in, header)) throw ParseError("empty samples file");
    std::vector<std::string> columns;
    {
        std::stringstream ss(header);
        std::string name;
        while (std::getline(ss, name, ',')) columns.push_back(name);
    }
    if (columns.size() < 3 || columns[0] != "chain") {
        throw ParseError("expected a samples CSV with columns chain,step,<stats...>");
    }
    std::map<std::int64_t, std::vector<std::vector<double>>> by_chain;
    std::string line;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string field;
        std::getline(row, field, ',');
        std::int64_t chain = 0;
        try {
            chain = std::stoll(field);
        } catch (const std::exception&) {
            throw ParseError("bad chain id '" + field + "'", line_no);
        }
        std::getline(row, field, ','); // step
        auto& series = by_chain[chain];
        series.resize(columns.size() - 2);
        for (std::size_t i = 0; i + 2 < columns.size(); ++i) {
            if (!std::getline(row, field, ',')) throw ParseError("short row", line_no);
            try {
                series[i].push_back(std::stod(field));
            } catch (const std::exception&) {
                throw ParseError("bad value '" + field + "'", line_no);
            }
        }
    }
    if (by_chain.empty()) throw ParseError("no samples");

    json out = json::array();
    for (std::size_t i = 0; i + 2 < columns.size(); ++i) {
        std::vector<std::vector<double>> chains;
        std::vector<double> pooled;
        for (const auto& [chain, series] : by_chain) {
            chains.push_back(series[i]);
            pooled.insert(pooled.end(), series[i].begin(), series[i].end());
        }
        json entry;
        entry["name"] = columns[i + 2];
        if (chains.size() >= 2) {
            const double rhat = gelman_rubin(chains);
            entry["psrf"] = std::isinf(rhat) ? json("inf") : json(rhat);
        }
        double ess = 0.0;
        for (const auto& c : chains) ess += effective_sample_size(c);
        entry["ess"] = ess;
        const auto lag_cap = static_cast<int>(std::min<std::int64_t>(
            max_lag, static_cast<std::int64_t>(chains.front().size()) - 1));
        if (lag_cap >= 1) {
            const auto ac = autocorrelation(chains.front(), lag_cap);
            json points = json::array();
            for (const auto& [lag, value] : ac.values) points.push_back({lag, value});
            entry["autocorrelation"] = points;
            entry["degenerate"] = ac.degenerate;
        }
        entry["summary"] = summary_to_json(posterior_summary(pooled));
        out.push_back(entry);
    }
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv, argv + argc);

    CLI::App app{"Exact goodness-of-fit testing for the finite-lattice Ising model"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string input;
    std::string format_text = "auto";
    GridReadOptions read_options;
    std::string boundary_text = "free";
    auto add_input_options = [&](CLI::App* cmd) {
        cmd->add_option("input", input, "input grid file")->required();
        cmd->add_option("--format", format_text, "input format: auto|text|csv|pgm");
        cmd->add_option("--threshold", read_options.threshold,
                        "PGM threshold: pixel >= t maps to 1");
        cmd->add_option("--boundary", boundary_text, "free|zero_clamped");
    };

    auto* stats_cmd = app.add_subcommand("stats", "sufficient statistics and component census");
    add_input_options(stats_cmd);

    auto* test_cmd = app.add_subcommand("test", "run the exact goodness-of-fit test");
    add_input_options(test_cmd);
    TestOptions test_opt;
    test_cmd->add_option("--chains", test_opt.chains, "number of parallel chains");
    test_cmd->add_option("--steps", test_opt.steps, "steps per chain");
    test_cmd->add_option("--burn-in", test_opt.burn_in, "burn-in steps");
    test_cmd->add_option("--thinning", test_opt.thinning, "record every k-th state");
    auto* test_seed = test_cmd->add_option("--seed", test_opt.seed, "RNG seed");
    test_cmd->add_option("--mode", test_opt.mode, "expanded|strict");
    test_cmd->add_option("--stats", test_opt.stats, "comma list of statistics");
    test_cmd->add_option("--motif-file", test_opt.motif_file, "extra motif definitions");
    test_cmd->add_option("--subtable-pairs", test_opt.pairs, "K pairs for non-homogeneity");
    test_cmd->add_option("--subtable-window", test_opt.window, "N for N x N subtables");
    test_cmd->add_option("--alpha", test_opt.alpha, "significance level for the exit code");
    test_cmd->add_option("--out", test_opt.out_dir, "output directory");
    test_cmd->add_option("--threads", test_opt.threads, "worker threads (0 = hardware)");

    auto* gen_cmd = app.add_subcommand("generate", "draw a configuration from a model");
    GenerateOptions gen_opt;
    gen_cmd->add_option("--model", gen_opt.model, "ising|diagonal|second|overall|vertex");
    gen_cmd->add_option("--alpha", gen_opt.alpha, "vertex weight");
    gen_cmd->add_option("--beta", gen_opt.beta, "disagreement-edge weight");
    gen_cmd->add_option("--gamma", gen_opt.gamma, "T3 weight");
    gen_cmd->add_option("--bc", gen_opt.bc, "generator boundary: periodic|free");
    gen_cmd->add_option("--size", gen_opt.size, "lattice size, e.g. 10x10");
    gen_cmd->add_option("--steps", gen_opt.steps, "Metropolis proposals");
    auto* gen_seed = gen_cmd->add_option("--seed", gen_opt.seed, "RNG seed");
    gen_cmd->add_option("--field", gen_opt.field_file, "CSV of per-site alphas (vertex model)");
    gen_cmd->add_option("--gradient", gen_opt.gradient, "lo:hi linear field (vertex model)");
    gen_cmd->add_option("-o,--output", gen_opt.output, "output grid file");
    gen_cmd->add_option("--format", format_text, "output format: auto|text|csv|pgm");

    auto* sample_cmd = app.add_subcommand("sample", "run one swap chain and record (T1, T2)");
    add_input_options(sample_cmd);
    std::string sample_mode = "expanded";
    std::int64_t sample_steps = 100000;
    std::int64_t sample_burn_in = 10000;
    std::int64_t sample_thinning = 10;
    std::uint64_t sample_seed_value = 0;
    std::string sample_out = "samples.csv";
    sample_cmd->add_option("--mode", sample_mode, "expanded|strict");
    sample_cmd->add_option("--steps", sample_steps, "steps");
    sample_cmd->add_option("--burn-in", sample_burn_in, "burn-in steps");
    sample_cmd->add_option("--thinning", sample_thinning, "record every k-th state");
    auto* sample_seed = sample_cmd->add_option("--seed", sample_seed_value, "RNG seed");
    sample_cmd->add_option("-o,--output", sample_out, "output CSV");

    auto* enum_cmd = app.add_subcommand("enumerate", "fiber enumeration and connectivity");
    std::string enum_size;
    std::string fiber_text;
    std::string expansions = "0,2";
    bool degree1 = false;
    std::int64_t t1_slice = -1;
    enum_cmd->add_option("--size", enum_size, "lattice size")->required();
    enum_cmd->add_option("--boundary", boundary_text, "free|zero_clamped");
    enum_cmd->add_option("--fiber", fiber_text, "target fiber a,b");
    enum_cmd->add_option("--expansions", expansions, "comma list of band widths");
    enum_cmd->add_flag("--degree1-count", degree1, "print the degree-one move count");
    enum_cmd->add_option("--t1", t1_slice, "list all fibers of a T1 slice");

    auto* diag_cmd = app.add_subcommand("diagnose", "convergence diagnostics from a samples CSV");
    std::string diag_input;
    int max_lag = 50;
    diag_cmd->add_option("input", diag_input, "samples CSV (chain,step,stats...)")->required();
    diag_cmd->add_option("--max-lag", max_lag, "autocorrelation horizon");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        read_options.format = parse_format(format_text);
        read_options.boundary = parse_boundary(boundary_text);
        if (stats_cmd->parsed()) {
            return cmd_stats(input, read_options);
        }
        if (test_cmd->parsed()) {
            test_opt.seed = resolve_seed(test_seed, test_opt.seed);
            return cmd_test(args, input, read_options, test_opt);
        }
        if (gen_cmd->parsed()) {
            gen_opt.seed = resolve_seed(gen_seed, gen_opt.seed);
            return cmd_generate(args, gen_opt, parse_format(format_text));
        }
        if (sample_cmd->parsed()) {
            return cmd_sample(args, input, read_options, sample_mode, sample_steps,
                              sample_burn_in, sample_thinning,
                              resolve_seed(sample_seed, sample_seed_value), sample_out);
        }
        if (enum_cmd->parsed()) {
            return cmd_enumerate(enum_size, read_options.boundary, fiber_text, expansions,
                                 degree1, t1_slice);
        }
        if (diag_cmd->parsed()) {
            return cmd_diagnose(diag_input, max_lag);
        }
        return kExitUsage;
    } catch (const UnderSampledError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSampling;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
