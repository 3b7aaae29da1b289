#include "cadro/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cadro {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    const auto end = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(end - start).count();
}

/// Empirical distribution with Laplace smoothing, used for the KL ball
/// center when some outcome is unobserved (the KL oracle needs a strictly
/// positive center for any positive radius).
ProbVector smoothed_empirical(const Dataset& data, std::size_t n) {
    constexpr double kSmoothing = 1e-6;
    std::vector<double> counts(n, 0.0);
    for (std::size_t outcome : data.outcomes) counts[outcome] += 1.0;
    bool all_observed = true;
    for (double c : counts) {
        if (c == 0.0) { all_observed = false; break; }
    }
    if (all_observed) return empirical_distribution(data);
    const double denom = static_cast<double>(data.size()) + static_cast<double>(n) * kSmoothing;
    numvec p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = (counts[i] + kSmoothing) / denom;
    return ProbVector(std::move(p));
}

} // namespace

const std::string& method_name(Method method) {
    static const std::string names[] = {"cadro", "saa", "tv", "kl", "w", "robust"};
    return names[static_cast<int>(method)];
}

Method method_from_name(const std::string& name) {
    for (Method m : {Method::cadro, Method::saa, Method::tv, Method::kl, Method::w,
                     Method::robust}) {
        if (method_name(m) == name) return m;
    }
    throw std::invalid_argument("unknown method name: " + name);
}

std::size_t tau_schedule(std::size_t m, double mu, double nu) {
    if (m < 2) throw std::invalid_argument("tau_schedule: need at least two samples");
    if (!(mu > 0.0) || !(nu > 0.0) || nu > 1.0)
        throw std::invalid_argument("tau_schedule: require mu > 0 and nu in (0, 1]");
    const double md = static_cast<double>(m);
    const double raw = std::floor(mu * nu * md * (md + 1.0) / (mu * md + nu));
    std::size_t tau = raw <= 1.0 ? 1 : static_cast<std::size_t>(raw);
    if (tau > m - 1) tau = m - 1;
    return tau;
}

CadroRunDetail cadro_run_detail(const Dataset& data, const CostModel& model,
                                const PipelineConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t m = data.size();
    const std::size_t tau = tau_schedule(m, cfg.mu, cfg.nu);
    const auto [train, calib] = split_dataset(data, tau);

    // Candidate decision: SAA on the training part.
    const ProbVector p_train = empirical_distribution(train);
    const SolveResult trained = minimize_expected(model, p_train, cfg.solver);
    const numvec& x_bar = trained.x;
    const numvec v = model.eval(x_bar);

    // High-confidence bound on <p_star, v> from the held-out part.
    const Projections proj = project_sample(calib, v);
    const double alpha = mean_bound(proj, m - tau, cfg.bound_spec());

    // DRO over the cost-aware set, warm-started at the candidate: the
    // candidate itself certifies min(alpha, max_i v_i), so the final value
    // can only improve on the raw bound.
    const CadroSet set{v, alpha};
    const DroResult dro = minimize_dro(model, AmbiguitySet(set), cfg.solver, &x_bar);

    // Plain SAA value on the held-out part (sandwich lower bound).
    const ProbVector p_calib = empirical_distribution(calib);
    const SolveResult saa = minimize_expected(model, p_calib, cfg.solver);

    CadroRunDetail detail;
    detail.x_bar = x_bar;
    detail.v = v;
    detail.alpha = alpha;
    RunResult& out = detail.result;
    out.method = method_name(Method::cadro);
    out.v_hat = dro.value;
    out.x_hat = dro.x;
    out.tau = tau;
    out.alpha_bound = alpha;
    out.v_star_saa = saa.value;
    out.v_oos = kNaN;
    out.diagnostics["iters_train"] = static_cast<double>(trained.iters);
    out.diagnostics["iters_dro"] = static_cast<double>(dro.iters);
    out.diagnostics["m_calib"] = static_cast<double>(m - tau);
    out.wall_time_ms = elapsed_ms(start);
    return detail;
}

RunResult cadro_run(const Dataset& data, const CostModel& model, const PipelineConfig& cfg) {
    return cadro_run_detail(data, model, cfg).result;
}

RunResult saa_certified_run(const Dataset& data, const CostModel& model,
                            const PipelineConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t m = data.size();
    const std::size_t tau = tau_schedule(m, cfg.mu, cfg.nu);
    const auto [train, calib] = split_dataset(data, tau);

    const ProbVector p_train = empirical_distribution(train);
    const SolveResult trained = minimize_expected(model, p_train, cfg.solver);
    const numvec v = model.eval(trained.x);
    const Projections proj = project_sample(calib, v);
    const double alpha = mean_bound(proj, m - tau, cfg.bound_spec());

    const ProbVector p_calib = empirical_distribution(calib);
    const SolveResult saa = minimize_expected(model, p_calib, cfg.solver);

    RunResult out;
    out.method = method_name(Method::saa);
    out.v_hat = alpha;
    out.x_hat = trained.x;
    out.tau = tau;
    out.alpha_bound = alpha;
    out.v_star_saa = saa.value;
    out.v_oos = kNaN;
    out.diagnostics["iters_train"] = static_cast<double>(trained.iters);
    out.diagnostics["m_calib"] = static_cast<double>(m - tau);
    out.wall_time_ms = elapsed_ms(start);
    return out;
}

RunResult d_dro_run(const Dataset& data, const CostModel& model, const PipelineConfig& cfg,
                    Method kind, const std::vector<numvec>* transport_ground_cost,
                    double radius_override) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = model.n();
    const std::size_t m = data.size();
    if (m == 0) throw std::invalid_argument("d_dro_run: empty dataset");

    AmbiguitySet set = FullSimplex{n};
    switch (kind) {
    case Method::tv: {
        const double r = radius_override >= 0.0 ? radius_override
                                                : tv_radius(n, m, cfg.beta);
        set = TvBall{empirical_distribution(data), r};
        break;
    }
    case Method::kl: {
        const double r = radius_override >= 0.0 ? radius_override
                                                : kl_radius(n, m, cfg.beta);
        set = KlBall{smoothed_empirical(data, n), r};
        break;
    }
    case Method::w: {
        if (transport_ground_cost == nullptr)
            throw std::invalid_argument("d_dro_run: transport DRO needs a ground cost matrix");
        const double r = radius_override >= 0.0
                             ? radius_override
                             : w_radius(*transport_ground_cost, n, m, cfg.beta);
        set = WBall{empirical_distribution(data), *transport_ground_cost, r};
        break;
    }
    default:
        throw std::invalid_argument("d_dro_run: kind must be tv, kl or w");
    }

    const DroResult dro = minimize_dro(model, set, cfg.solver);
    const ProbVector p_hat = empirical_distribution(data);
    const SolveResult saa = minimize_expected(model, p_hat, cfg.solver);

    RunResult out;
    out.method = method_name(kind);
    out.v_hat = dro.value;
    out.x_hat = dro.x;
    out.tau = 0;
    out.alpha_bound = kNaN;
    out.v_star_saa = saa.value;
    out.v_oos = kNaN;
    out.diagnostics["iters_dro"] = static_cast<double>(dro.iters);
    out.wall_time_ms = elapsed_ms(start);
    return out;
}

RunResult robust_run(const CostModel& model, const PipelineConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const SolveResult dro = minimize_robust(model, cfg.solver);

    RunResult out;
    out.method = method_name(Method::robust);
    out.v_hat = dro.value;
    out.x_hat = dro.x;
    out.tau = 0;
    out.alpha_bound = kNaN;
    out.v_star_saa = kNaN;
    out.v_oos = kNaN;
    out.diagnostics["iters_dro"] = static_cast<double>(dro.iters);
    out.wall_time_ms = elapsed_ms(start);
    return out;
}

RunResult run_method(Method method, const Dataset& data, const CostModel& model,
                     const PipelineConfig& cfg,
                     const std::vector<numvec>* transport_ground_cost) {
    switch (method) {
    case Method::cadro: return cadro_run(data, model, cfg);
    case Method::saa: return saa_certified_run(data, model, cfg);
    case Method::tv:
    case Method::kl:
    case Method::w: return d_dro_run(data, model, cfg, method, transport_ground_cost);
    case Method::robust: return robust_run(model, cfg);
    }
    throw std::logic_error("run_method: unreachable");
}

} // namespace cadro
