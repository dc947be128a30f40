// Python bindings for the core operations: configurations and sufficient
// statistics, canonical shapes, the swap sampler, the desk-scale oracle,
// the test statistics and the inference runtime.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "isinggof/canonical.hpp"
#include "isinggof/grid_io.hpp"
#include "isinggof/inference.hpp"
#include "isinggof/oracle.hpp"
#include "isinggof/sampler.hpp"
#include "isinggof/statistics.hpp"
#include "isinggof/version.hpp"

namespace py = pybind11;
using namespace isinggof;

namespace {

BoundaryMode boundary_from_string(const std::string& name) {
    if (name == "free") return BoundaryMode::free;
    if (name == "zero_clamped") return BoundaryMode::zero_clamped;
    throw ValidationError("boundary must be 'free' or 'zero_clamped'");
}

Sidedness sidedness_from_string(const std::string& name) {
    if (name == "lower") return Sidedness::lower;
    if (name == "upper") return Sidedness::upper;
    if (name == "two_sided") return Sidedness::two_sided;
    throw ValidationError("sided must be 'lower', 'upper' or 'two_sided'");
}

SymmetryClosure closure_from_string(const std::string& name) {
    if (name == "none") return SymmetryClosure::none;
    if (name == "rotations") return SymmetryClosure::rotations;
    if (name == "rotations_and_reflections") return SymmetryClosure::rotations_and_reflections;
    throw ValidationError("unknown symmetry closure '" + name + "'");
}

/// Builds a Configuration from a 2D (or 1D) array of 0/1, read row-major
/// like a grid file.
Configuration config_from_array(const py::array_t<std::uint8_t>& array,
                                const std::string& boundary) {
    const auto info = array.request();
    if (info.ndim != 1 && info.ndim != 2) {
        throw ValidationError("configuration arrays must be 1D or 2D");
    }
    if (info.ndim == 1) {
        const std::int64_t cols = info.shape[0];
        LatticeShape shape({cols}, boundary_from_string(boundary));
        std::vector<std::uint8_t> cells(static_cast<std::size_t>(cols), 0);
        for (std::int64_t c = 0; c < cols; ++c) {
            cells[static_cast<std::size_t>(c)] = array.at(static_cast<py::ssize_t>(c));
        }
        return Configuration(std::move(shape), std::move(cells));
    }
    const std::int64_t rows = info.shape[0];
    const std::int64_t cols = info.shape[1];
    LatticeShape shape({rows, cols}, boundary_from_string(boundary));
    std::vector<std::uint8_t> cells(static_cast<std::size_t>(rows * cols), 0);
    for (std::int64_t r = 0; r < rows; ++r) {
        for (std::int64_t c = 0; c < cols; ++c) {
            cells[static_cast<std::size_t>(r + c * rows)] =
                array.at(static_cast<py::ssize_t>(r), static_cast<py::ssize_t>(c));
        }
    }
    return Configuration(std::move(shape), std::move(cells));
}

py::array_t<std::uint8_t> config_to_array(const Configuration& config) {
    const auto& dims = config.shape().dims;
    if (dims.size() > 2) throw ValidationError("to_array supports 1D and 2D lattices");
    const std::int64_t rows = dims.size() == 2 ? dims[0] : 1;
    const std::int64_t cols = dims.size() == 2 ? dims[1] : dims[0];
    py::array_t<std::uint8_t> out({rows, cols});
    auto view = out.mutable_unchecked<2>();
    for (std::int64_t r = 0; r < rows; ++r) {
        for (std::int64_t c = 0; c < cols; ++c) {
            view(r, c) = config.occupied(r + c * rows) ? 1 : 0;
        }
    }
    return out;
}

py::dict summary_to_dict(const PosteriorSummary& s) {
    py::dict out;
    out["mean"] = s.mean;
    out["sd"] = s.sd;
    out["n"] = s.n;
    py::dict q;
    for (const auto& [level, value] : s.quantiles) {
        q[py::float_(level)] = value;
    }
    out["quantiles"] = q;
    return out;
}

py::dict report_to_dict(const TestReport& report) {
    py::dict out;
    out["fiber"] = py::make_tuple(report.fiber.a, report.fiber.b);
    out["pooled_samples"] = report.pooled_samples;
    py::list stats;
    for (const auto& s : report.statistics) {
        py::dict entry;
        entry["name"] = s.name;
        entry["observed"] = s.observed;
        entry["p_value"] = s.p_value;
        entry["posterior"] = summary_to_dict(s.posterior);
        entry["psrf"] = s.diagnostics.psrf;
        entry["ess"] = s.diagnostics.ess;
        stats.append(entry);
    }
    out["statistics"] = stats;
    py::list chains;
    for (const auto& c : report.chains) {
        py::dict entry;
        entry["acceptance_rate"] = c.acceptance_rate;
        entry["on_fiber_fraction"] = c.on_fiber_fraction;
        entry["recorded"] = c.recorded;
        chains.append(entry);
    }
    out["chains"] = chains;
    return out;
}

StatDescriptor descriptor_from_name(const std::string& name, std::int64_t pairs,
                                    std::int64_t window, std::uint64_t seed) {
    for (const auto& d : default_descriptors({pairs, window, seed})) {
        if (d.name == name) return d;
    }
    throw ValidationError("unknown statistic '" + name + "'");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact goodness-of-fit testing for the finite-lattice Ising model";
    m.attr("__version__") = kVersion;

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<InvalidSwapError>(m, "InvalidSwapError", PyExc_ValueError);
    py::register_exception<InfeasibleFiberError>(m, "InfeasibleFiberError", PyExc_ValueError);
    py::register_exception<DoesNotFitError>(m, "DoesNotFitError", PyExc_ValueError);
    py::register_exception<BudgetExceededError>(m, "BudgetExceededError", PyExc_RuntimeError);
    py::register_exception<UnderSampledError>(m, "UnderSampledError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::class_<LatticeShape>(m, "LatticeShape")
        .def(py::init([](const std::vector<std::int64_t>& dims, const std::string& boundary) {
                 return LatticeShape(dims, boundary_from_string(boundary));
             }),
             py::arg("dims"), py::arg("boundary") = "free")
        .def_property_readonly("dims", [](const LatticeShape& s) { return s.dims; })
        .def_property_readonly("boundary",
                               [](const LatticeShape& s) {
                                   return s.boundary == BoundaryMode::free ? "free"
                                                                           : "zero_clamped";
                               })
        .def("vertex_count", &LatticeShape::vertex_count)
        .def("edge_count", &LatticeShape::edge_count)
        .def("__repr__", [](const LatticeShape& s) {
            std::ostringstream out;
            out << "LatticeShape([";
            for (std::size_t i = 0; i < s.dims.size(); ++i) out << (i ? ", " : "") << s.dims[i];
            out << "], "
                << (s.boundary == BoundaryMode::free ? "'free'" : "'zero_clamped'") << ")";
            return out.str();
        });

    py::class_<Configuration>(m, "Configuration")
        .def(py::init(&config_from_array), py::arg("cells"), py::arg("boundary") = "free",
             "Build from a 1D/2D array of 0/1 (rows become lattice axis 1).")
        .def_property_readonly("shape", &Configuration::shape)
        .def_property_readonly("t1", &Configuration::t1)
        .def_property_readonly("t2", &Configuration::t2)
        .def("suff_stats",
             [](const Configuration& c) { return py::make_tuple(c.t1(), c.t2()); })
        .def("spin_stats",
             [](const Configuration& c) {
                 const auto [s1, s2] = c.spin_stats();
                 return py::make_tuple(s1, s2);
             })
        .def("to_array", &config_to_array)
        .def("apply_swap", &Configuration::apply_swap, py::arg("on_site"), py::arg("off_site"),
             "Apply the simple swap (on <- 1, off <- 0); returns the T2 change.")
        .def("swap_delta_t2", &Configuration::swap_delta_t2, py::arg("on_site"),
             py::arg("off_site"))
        .def("component_sizes",
             [](const Configuration& c) { return connected_components(c).sizes(); })
        .def("singleton_count",
             [](const Configuration& c) { return connected_components(c).singleton_count(); })
        .def("__eq__", [](const Configuration& a, const Configuration& b) { return a == b; });

    m.def("read_grid",
          [](const std::string& path, const std::string& boundary, int threshold) {
              GridReadOptions options;
              options.boundary = boundary_from_string(boundary);
              options.threshold = threshold;
              return read_grid(path, options);
          },
          py::arg("path"), py::arg("boundary") = "free", py::arg("threshold") = 128);
    m.def("write_grid",
          [](const Configuration& config, const std::string& path) { write_grid(config, path); },
          py::arg("config"), py::arg("path"));

    // canonical shapes
    py::class_<RectangularSpec>(m, "RectangularSpec")
        .def(py::init([](std::int64_t n, std::int64_t m, std::int64_t d1, std::int64_t d2,
                         std::int64_t s) {
                 RectangularSpec spec{n, m, d1, d2, s};
                 spec.validate();
                 return spec;
             }),
             py::arg("n"), py::arg("m"), py::arg("d1") = 0, py::arg("d2") = 0, py::arg("s") = 0)
        .def_readonly("n", &RectangularSpec::n)
        .def_readonly("m", &RectangularSpec::m)
        .def_readonly("d1", &RectangularSpec::d1)
        .def_readonly("d2", &RectangularSpec::d2)
        .def_readonly("s", &RectangularSpec::s)
        .def("singleton_count", &RectangularSpec::singleton_count)
        .def("__repr__", [](const RectangularSpec& r) {
            std::ostringstream out;
            out << "RectangularSpec(n=" << r.n << ", m=" << r.m << ", d1=" << r.d1
                << ", d2=" << r.d2 << ", s=" << r.s << ")";
            return out.str();
        });

    m.def("rect_stats", [](const RectangularSpec& spec) {
        const auto [t1, t2] = rect_stats(spec);
        return py::make_tuple(t1, t2);
    });
    m.def("realize_rect",
          [](const RectangularSpec& spec, const LatticeShape& shape, std::int64_t row,
             std::int64_t col) { return realize_rect(spec, shape, shape.index_of({row, col})); },
          py::arg("spec"), py::arg("shape"), py::arg("row") = 2, py::arg("col") = 2);
    m.def("max_singleton_2d",
          [](std::int64_t a, std::int64_t b) { return max_singleton_2d({a, b}); }, py::arg("a"),
          py::arg("b"));
    m.def("max_singleton_1d",
          [](std::int64_t a, std::int64_t b) {
              const auto r = max_singleton_1d({a, b});
              return py::make_tuple(r.singletons, r.component_size);
          },
          py::arg("a"), py::arg("b"));
    m.def("fiber_feasible",
          [](std::int64_t a, std::int64_t b, int d) { return fiber_feasible({a, b}, d); },
          py::arg("a"), py::arg("b"), py::arg("d") = 2);
    m.def("normalize_1d", [](const Configuration& config) {
        py::list out;
        for (const auto& sw : normalize_1d(config)) {
            out.append(py::make_tuple(sw.on, sw.off));
        }
        return out;
    });

    // sampler
    m.def("expanded_contains",
          [](std::int64_t t1, std::int64_t t2, std::int64_t a, std::int64_t b, int d,
             bool even_offsets_only) {
              return expanded_contains(t1, t2, {a, b}, d, even_offsets_only);
          },
          py::arg("t1"), py::arg("t2"), py::arg("a"), py::arg("b"), py::arg("d") = 2,
          py::arg("even_offsets_only") = true);

    m.def("run_chain",
          [](const Configuration& start, std::int64_t steps, std::int64_t burn_in,
             std::int64_t thinning, std::uint64_t seed, const std::string& mode,
             bool record_all) {
              ChainSettings settings;
              settings.mode = mode == "strict" ? ChainMode::strict : ChainMode::expanded;
              settings.target = start.fiber();
              settings.steps = steps;
              settings.burn_in = burn_in;
              settings.thinning = thinning;
              settings.seed = seed;
              settings.record_policy =
                  record_all ? RecordPolicy::all_states : RecordPolicy::on_fiber_only;
              const auto run = run_chain(start, settings);
              py::dict out;
              out["acceptance_rate"] = run.acceptance_rate;
              out["on_fiber_fraction"] = run.on_fiber_fraction;
              out["recorded"] = run.recorded_count;
              out["recorded_stats"] = run.recorded_stats;
              out["final_state"] = run.final_state;
              return out;
          },
          py::arg("start"), py::arg("steps") = 100000, py::arg("burn_in") = 10000,
          py::arg("thinning") = 10, py::arg("seed") = 0, py::arg("mode") = "expanded",
          py::arg("record_all") = false);

    m.def("generate_boltzmann",
          [](const std::vector<std::int64_t>& dims, double alpha, double beta, double gamma,
             const std::string& t3, const std::string& boundary, std::int64_t steps,
             std::uint64_t seed) {
              BoltzmannModel model;
              model.alpha = alpha;
              model.beta = beta;
              model.gamma = gamma;
              if (t3 == "none") {
                  model.t3_kind = T3Kind::none;
              } else if (t3 == "second_nearest") {
                  model.t3_kind = T3Kind::second_nearest;
              } else if (t3 == "diagonal") {
                  model.t3_kind = T3Kind::diagonal;
              } else if (t3 == "overall_parity") {
                  model.t3_kind = T3Kind::overall_parity;
              } else {
                  throw ValidationError("unknown t3 kind '" + t3 + "'");
              }
              model.boundary = boundary == "free" ? GeneratorBoundary::free
                                                  : GeneratorBoundary::periodic;
              return generate_boltzmann(model, LatticeShape(dims), steps, seed);
          },
          py::arg("dims"), py::arg("alpha") = 0.0, py::arg("beta") = 0.0, py::arg("gamma") = 0.0,
          py::arg("t3") = "none", py::arg("boundary") = "periodic", py::arg("steps") = 10000,
          py::arg("seed") = 0);

    // oracle
    m.def("enumerate_fiber",
          [](const LatticeShape& shape, std::int64_t a, std::int64_t b, std::int64_t budget) {
              return enumerate_fiber(shape, {a, b}, budget);
          },
          py::arg("shape"), py::arg("a"), py::arg("b"),
          py::arg("budget") = kDefaultEnumerationBudget);
    m.def("swap_graph_component_count",
          [](const LatticeShape& shape, std::int64_t a, std::int64_t b, std::int64_t expansion) {
              const auto fiber = enumerate_fiber_masks(shape, {a, b});
              return swap_graph_components_masks(shape, fiber, expansion).size();
          },
          py::arg("shape"), py::arg("a"), py::arg("b"), py::arg("expansion") = 2);
    m.def("degree1_move_count", &degree1_move_count, py::arg("shape"));

    // statistics
    py::class_<Motif>(m, "Motif")
        .def(py::init([](const std::vector<std::string>& rows, const std::string& closure) {
                 return Motif(rows, closure_from_string(closure));
             }),
             py::arg("rows"), py::arg("closure") = "none",
             "rows use characters '1', '0' and '.' (wildcard)")
        .def("variant_count", [](const Motif& motif) { return motif.variants().size(); });
    m.def("default_motif", [](const std::string& name) {
        if (name == "diagonal") return default_diagonal_motif();
        if (name == "adjacent") return default_adjacent_motif();
        if (name == "consecutive") return default_consecutive_motif();
        throw ValidationError("default motifs: diagonal, adjacent, consecutive");
    });
    m.def("count_motif", &count_motif, py::arg("config"), py::arg("motif"));
    m.def("non_homogeneity",
          [](const Configuration& config, std::int64_t pairs, std::int64_t window,
             std::uint64_t seed, const std::string& kind) {
              if (kind != "dT1" && kind != "dT2" && kind != "dT12") {
                  throw ValidationError("kind must be dT1, dT2 or dT12");
              }
              const SubtableScheme scheme{pairs, window, seed};
              const NonHomKind k = kind == "dT1"   ? NonHomKind::dT1
                                   : kind == "dT2" ? NonHomKind::dT2
                                                   : NonHomKind::dT12;
              return non_homogeneity(config, scheme, k);
          },
          py::arg("config"), py::arg("pairs") = 100, py::arg("window") = 3, py::arg("seed") = 0,
          py::arg("kind") = "dT12");

    // inference
    m.def("mc_pvalue",
          [](double observed, const std::vector<double>& samples, const std::string& sided) {
              return mc_pvalue(observed, samples, sidedness_from_string(sided));
          },
          py::arg("observed"), py::arg("samples"), py::arg("sided") = "two_sided");
    m.def("posterior_summary", [](const std::vector<double>& samples) {
        return summary_to_dict(posterior_summary(samples));
    });
    m.def("gelman_rubin", &gelman_rubin, py::arg("chains"));
    m.def("autocorrelation",
          [](const std::vector<double>& series, int max_lag) {
              const auto ac = autocorrelation(series, max_lag);
              py::list out;
              for (const auto& [lag, value] : ac.values) out.append(py::make_tuple(lag, value));
              return out;
          },
          py::arg("series"), py::arg("max_lag") = 50);
    m.def("effective_sample_size", &effective_sample_size, py::arg("series"));

    m.def("run_test",
          [](const Configuration& observed, const std::vector<std::string>& statistics,
             std::int64_t steps, std::int64_t burn_in, std::int64_t thinning, std::uint64_t seed,
             int chains, std::int64_t pairs, std::int64_t window, int threads) {
              ChainSettings settings;
              settings.target = observed.fiber();
              settings.steps = steps;
              settings.burn_in = burn_in;
              settings.thinning = thinning;
              settings.seed = seed;
              std::vector<StatDescriptor> descriptors;
              const std::uint64_t scheme_seed = derive_stream(seed, 0x736368656dULL);
              for (const auto& name : statistics) {
                  descriptors.push_back(descriptor_from_name(name, pairs, window, scheme_seed));
              }
              return report_to_dict(run_test(observed, descriptors, settings, chains, threads));
          },
          py::arg("observed"),
          py::arg("statistics") = std::vector<std::string>{"diagonal_pairs", "adjacent_pairs",
                                                           "consecutive_pairs", "dT1", "dT2",
                                                           "dT12"},
          py::arg("steps") = 100000, py::arg("burn_in") = 10000, py::arg("thinning") = 10,
          py::arg("seed") = 0, py::arg("chains") = 3, py::arg("pairs") = 100,
          py::arg("window") = 3, py::arg("threads") = 0);
}
