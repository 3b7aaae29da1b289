/**
 * Python bindings for the certified DRO library: instance generation, the
 * pipeline / baseline runners, the worst-case oracles, the mean bounds and
 * the ball-radius calibrations.  Vectors cross the boundary as plain lists;
 * run results come back as dicts mirroring the CLI's JSON output.
 */
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cadro/experiment.hpp"

#include <stdexcept>

namespace py = pybind11;
using namespace cadro;

namespace {

BoundKind bound_from_name(const std::string& name) {
    if (name == "ordered") return BoundKind::ordered;
    if (name == "hoeffding") return BoundKind::hoeffding;
    throw std::invalid_argument("bound must be 'ordered' or 'hoeffding', got: " + name);
}

GammaMode gamma_from_name(const std::string& name) {
    if (name == "asymptotic") return GammaMode::asymptotic;
    if (name == "exact-ks") return GammaMode::exact_ks;
    throw std::invalid_argument("gamma must be 'asymptotic' or 'exact-ks', got: " + name);
}

PipelineConfig make_config(double beta, double mu, double nu, const std::string& bound,
                           const std::string& gamma, std::size_t max_iters) {
    PipelineConfig cfg;
    cfg.beta = beta;
    cfg.mu = mu;
    cfg.nu = nu;
    cfg.bound = bound_from_name(bound);
    cfg.gamma_mode = gamma_from_name(gamma);
    cfg.solver.max_iters = max_iters;
    return cfg;
}

py::dict result_to_dict(const RunResult& r) {
    py::dict d;
    d["method"] = r.method;
    d["v_hat"] = r.v_hat;
    d["x_hat"] = r.x_hat;
    d["tau"] = r.tau;
    d["alpha_bound"] = r.alpha_bound;
    d["v_oos"] = r.v_oos;
    d["v_star_saa"] = r.v_star_saa;
    d["wall_time_ms"] = r.wall_time_ms;
    d["diagnostics"] = r.diagnostics;
    return d;
}

py::tuple worst_to_tuple(const WorstCase& wc) {
    numvec p(wc.argmax.dim());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = wc.argmax[i];
    return py::make_tuple(wc.value, std::move(p));
}

/// One replication: draw a dataset on the (method, m, rep) stream and run.
py::dict run_one(const FacilityInstance& instance, const std::string& method_str,
                 std::size_t m, std::size_t rep, std::uint64_t master_seed, double beta,
                 double mu, double nu, const std::string& bound, const std::string& gamma,
                 std::size_t max_iters) {
    const Method method = method_from_name(method_str);
    const FacilityModel model(instance);
    const PipelineConfig cfg = make_config(beta, mu, nu, bound, gamma, max_iters);

    RngStream rng(master_seed, stream_id_for(method_str, m, rep));
    const Dataset data = draw_dataset(instance.p_star, m, rng);

    std::vector<numvec> ground;
    const std::vector<numvec>* ground_ptr = nullptr;
    if (method == Method::w) {
        ground = transport_cost_matrix(instance);
        ground_ptr = &ground;
    }

    RunResult result = run_method(method, data, model, cfg, ground_ptr);
    result.v_oos = expected_cost(result.x_hat, instance.p_star, model);

    py::dict d = result_to_dict(result);
    d["m"] = m;
    d["rep"] = rep;
    d["seed"] = rng.stream_id();
    return d;
}

} // namespace

PYBIND11_MODULE(_cadro, mod) {
    mod.doc() = "cost-aware distributionally robust optimization core";

    py::class_<FacilityInstance>(mod, "FacilityInstance")
        .def_readonly("n", &FacilityInstance::n)
        .def_readonly("n_x", &FacilityInstance::n_x)
        .def_readonly("seed", &FacilityInstance::seed)
        .def_property_readonly("points",
                               [](const FacilityInstance& inst) {
                                   std::vector<std::pair<double, double>> pts;
                                   for (const auto& p : inst.points)
                                       pts.emplace_back(p[0], p[1]);
                                   return pts;
                               })
        .def_property_readonly("p_star",
                               [](const FacilityInstance& inst) {
                                   numvec p(inst.p_star.dim());
                                   for (std::size_t i = 0; i < p.size(); ++i)
                                       p[i] = inst.p_star[i];
                                   return p;
                               })
        .def("__repr__", [](const FacilityInstance& inst) {
            return "FacilityInstance(n=" + std::to_string(inst.n) +
                   ", n_x=" + std::to_string(inst.n_x) +
                   ", seed=" + std::to_string(inst.seed) + ")";
        });

    mod.def("generate_instance", &generate_instance, py::arg("seed"), py::arg("n"),
            py::arg("n_x"),
            "Deterministic random facility-location instance on the 10 x 10 square.");
    mod.def("save_instance", &save_instance, py::arg("path"), py::arg("instance"));
    mod.def("load_instance", &load_instance, py::arg("path"));
    mod.def(
        "eval_costs",
        [](const FacilityInstance& instance, const numvec& x) {
            return FacilityModel(instance).eval(x);
        },
        py::arg("instance"), py::arg("x"),
        "Per-outcome cost vector L(x) for a stacked stall layout.");
    mod.def(
        "transport_cost_matrix",
        [](const FacilityInstance& instance) { return transport_cost_matrix(instance); },
        py::arg("instance"), "Pairwise demand-point distances (transport ground cost).");

    mod.def("run", &run_one, py::arg("instance"), py::arg("method"), py::arg("m"),
            py::arg("rep") = 0, py::arg("master_seed") = 1, py::arg("beta") = 0.01,
            py::arg("mu") = 0.01, py::arg("nu") = 0.8, py::arg("bound") = "ordered",
            py::arg("gamma") = "asymptotic", py::arg("max_iters") = 20000,
            "One replication of a method (cadro|saa|tv|kl|w|robust) on a freshly "
            "drawn dataset; returns the result fields as a dict.");

    mod.def("tau_schedule", &tau_schedule, py::arg("m"), py::arg("mu") = 0.01,
            py::arg("nu") = 0.8, "Training split size tau(m), clamped to [1, m-1].");

    // ------------------------------------------------------ worst-case oracles
    mod.def(
        "cadro_worst_case",
        [](const numvec& v, double alpha, const numvec& z) {
            return worst_to_tuple(cadro_worst_case(CadroSet(v, alpha), z));
        },
        py::arg("v"), py::arg("alpha"), py::arg("z"),
        "max <p, z> over {p in simplex : <p, v> <= alpha}; returns (value, argmax).");
    mod.def(
        "tv_worst_case",
        [](const numvec& center, double radius, const numvec& z) {
            return worst_to_tuple(tv_worst_case(TvBall(ProbVector(center), radius), z));
        },
        py::arg("center"), py::arg("radius"), py::arg("z"),
        "max <p, z> over the L1 ball of the given radius around center.");
    mod.def(
        "kl_worst_case",
        [](const numvec& center, double radius, const numvec& z) {
            return worst_to_tuple(kl_worst_case(KlBall(ProbVector(center), radius), z));
        },
        py::arg("center"), py::arg("radius"), py::arg("z"),
        "max <p, z> over {p : KL(p || center) <= radius}.");
    mod.def(
        "w_worst_case",
        [](const numvec& center, const std::vector<numvec>& cost, double radius,
           const numvec& z) {
            return worst_to_tuple(
                w_worst_case(WBall(ProbVector(center), cost, radius), z));
        },
        py::arg("center"), py::arg("cost"), py::arg("radius"), py::arg("z"),
        "max <p, z> over the transport ball of the given radius around center.");

    // ------------------------------------------------------ bounds and radii
    mod.def("hoeffding_radius", &hoeffding_radius, py::arg("m"), py::arg("beta"));
    mod.def(
        "gamma_value",
        [](std::size_t m, double beta, const std::string& mode) {
            return gamma_value(m, beta, gamma_from_name(mode));
        },
        py::arg("m"), py::arg("beta"), py::arg("mode") = "asymptotic",
        "One-sided CDF band width used by the ordered mean bound.");
    mod.def(
        "mean_bound",
        [](const numvec& eta, double eta_bar, double rg, const std::string& kind,
           double beta, const std::string& gamma) {
            Projections proj;
            proj.eta = eta;
            proj.eta_bar = eta_bar;
            proj.rg = rg;
            return mean_bound(proj, eta.size(),
                              {bound_from_name(kind), beta, gamma_from_name(gamma)});
        },
        py::arg("eta"), py::arg("eta_bar"), py::arg("rg"), py::arg("kind") = "ordered",
        py::arg("beta") = 0.01, py::arg("gamma") = "asymptotic",
        "High-confidence upper bound on the mean of a projected sample whose "
        "support has maximum eta_bar and range rg.");

    mod.def("tv_radius", &tv_radius, py::arg("n"), py::arg("m"), py::arg("beta"));
    mod.def("kl_radius", &kl_radius, py::arg("n"), py::arg("m"), py::arg("beta"));
    mod.def("w_radius", &w_radius, py::arg("cost"), py::arg("n"), py::arg("m"),
            py::arg("beta"));
}
