#include "cadro/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace cadro {

namespace {

void check_config(const SolverConfig& cfg) {
    if (cfg.max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
    if (!(cfg.step_c > 0.0)) throw std::invalid_argument("SolverConfig: step_c must be > 0");
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be > 0");
}

double norm2(const numvec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

/**
 * Generic projected subgradient loop.  The oracle returns F(x) and writes
 * a subgradient into g.  Two phases: c/sqrt(t) steps on normalized
 * directions to locate the minimum, then a geometric step decay restarted
 * from the best iterate to polish it; stops early when the best value
 * stalls.  Entirely deterministic.
 */
struct Engine {
    const std::function<numvec(const numvec&)>& project;
    const std::function<double(const numvec&, numvec&)>& oracle;
    const SolverConfig& cfg;
    double radius_hint = -1.0;  ///< feasible-set scale override (> 0 to use)

    SolveResult run(const numvec& start) const {
        numvec x = project(start);
        const std::size_t dim = x.size();

        // Feasible-set scale from projections of far-out points (exact for
        // box sets); a degenerate set means there is nothing to optimize.
        double radius = radius_hint;
        if (radius < 0.0) {
            numvec probe_lo(dim), probe_hi(dim);
            for (std::size_t d = 0; d < dim; ++d) {
                probe_lo[d] = x[d] - 1e12;
                probe_hi[d] = x[d] + 1e12;
            }
            probe_lo = project(probe_lo);
            probe_hi = project(probe_hi);
            double span = 0.0;
            for (std::size_t d = 0; d < dim; ++d)
                span += (probe_hi[d] - probe_lo[d]) * (probe_hi[d] - probe_lo[d]);
            radius = 0.5 * std::sqrt(span);
        }

        numvec g(dim, 0.0);
        double f_best = oracle(x, g);
        numvec x_best = x;
        if (radius <= 0.0) return {std::move(x_best), f_best, 1};

        const double c = cfg.step_c * radius;
        const std::size_t t1 = std::max<std::size_t>(1, (cfg.max_iters * 3) / 5);
        const std::size_t window = std::max<std::size_t>(200, cfg.max_iters / 20);
        double f_window = f_best;
        std::size_t window_start = 0;

        numvec x_sum = x;
        std::size_t iters = 1;
        bool polished = false;
        double step_polish = 0.0, decay = 1.0;

        for (std::size_t t = 1; t < cfg.max_iters; ++t, ++iters) {
            const double gn = norm2(g);
            if (gn == 0.0) break;  // subgradient zero: x minimizes F globally

            double step;
            if (t < t1) {
                step = c / std::sqrt(static_cast<double>(t));
            } else {
                if (!polished) {
                    // Polish phase: restart from the incumbent and shrink the
                    // step geometrically down to ~1e-7 of the set radius.
                    polished = true;
                    x = x_best;
                    f_window = f_best;
                    window_start = t;
                    step_polish = c / std::sqrt(static_cast<double>(t1));
                    const double floor_step = 1e-7 * c;
                    const auto tail = static_cast<double>(cfg.max_iters - t1 + 1);
                    decay = std::pow(floor_step / step_polish, 1.0 / tail);
                    oracle(x, g);
                    if (norm2(g) == 0.0) break;
                }
                step_polish *= decay;
                step = step_polish;
            }

            for (std::size_t d = 0; d < dim; ++d) x[d] -= step * g[d] / gn;
            x = project(x);
            const double f = oracle(x, g);
            if (f < f_best) {
                f_best = f;
                x_best = x;
            }
            for (std::size_t d = 0; d < dim; ++d) x_sum[d] += x[d];

            if (t - window_start >= window) {
                if (f_window - f_best <= cfg.tol * std::max(1.0, std::abs(f_best))) break;
                f_window = f_best;
                window_start = t;
            }
        }

        numvec x_out;
        switch (cfg.averaging) {
            case Averaging::best: x_out = std::move(x_best); break;
            case Averaging::last: x_out = std::move(x); break;
            case Averaging::average: {
                x_out = std::move(x_sum);
                for (double& xd : x_out) xd /= static_cast<double>(iters);
                x_out = project(x_out);
                break;
            }
        }
        numvec g_unused(dim, 0.0);
        const double value = oracle(x_out, g_unused);
        return {std::move(x_out), value, iters};
    }
};

SolveResult run_engine(const CostModel& model,
                       const std::function<double(const numvec&, numvec&)>& oracle,
                       const SolverConfig& cfg, const numvec* start) {
    check_config(cfg);
    const std::function<numvec(const numvec&)> project = [&](const numvec& x) {
        return model.project(x);
    };
    const numvec x0 = start != nullptr ? *start : model.initial_point();
    if (x0.size() != model.dim_x())
        throw std::invalid_argument("solver: starting point dimension mismatch");
    return Engine{project, oracle, cfg}.run(x0);
}

/// Weighted subgradient sum_k p_k subgrad(x, k) over the support of p.
void weighted_subgrad(const CostModel& model, const numvec& x, const numvec& weights,
                      numvec& g) {
    std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (weights[k] == 0.0) continue;
        const numvec gk = model.subgrad(x, k);
        for (std::size_t d = 0; d < g.size(); ++d) g[d] += weights[k] * gk[d];
    }
}

} // namespace

SolveResult minimize_expected(const CostModel& model, const ProbVector& p,
                              const SolverConfig& cfg, const numvec* start) {
    if (p.dim() != model.n())
        throw std::invalid_argument("minimize_expected: distribution dimension mismatch");
    const std::function<double(const numvec&, numvec&)> oracle = [&](const numvec& x,
                                                                     numvec& g) {
        weighted_subgrad(model, x, p.weights(), g);
        return dot(p, model.eval(x));
    };
    return run_engine(model, oracle, cfg, start);
}

SolveResult minimize_robust(const CostModel& model, const SolverConfig& cfg) {
    const std::function<double(const numvec&, numvec&)> oracle = [&](const numvec& x,
                                                                     numvec& g) {
        const numvec z = model.eval(x);
        std::size_t active = 0;
        for (std::size_t i = 1; i < z.size(); ++i)
            if (z[i] > z[active]) active = i;
        g = model.subgrad(x, active);
        return z[active];
    };
    return run_engine(model, oracle, cfg, nullptr);
}

DroResult minimize_dro(const CostModel& model, const AmbiguitySet& set,
                       const SolverConfig& cfg, const numvec* start) {
    if (set_dim(set) != model.n())
        throw std::invalid_argument("minimize_dro: set dimension mismatch");

    // Inside the loop the KL oracle may run with a relaxed dual tolerance and
    // a warm bracket (an epsilon-subgradient); the returned value is always
    // recomputed with the full-precision oracle.
    const KlBall* kl = std::get_if<KlBall>(&set);
    double kl_lambda_hint = 0.0;

    const std::function<double(const numvec&, numvec&)> oracle = [&](const numvec& x,
                                                                     numvec& g) {
        const numvec z = model.eval(x);
        WorstCase wc = [&] {
            if (kl != nullptr) {
                KlOracleOptions opts;
                opts.lambda_tol = 1e-4 * std::max(1.0, kl_lambda_hint);
                if (kl_lambda_hint > 0.0) opts.lambda_hint = kl_lambda_hint;
                opts.lambda_out = &kl_lambda_hint;
                return kl_worst_case(*kl, z, opts);
            }
            return worst_case(set, z);
        }();
        weighted_subgrad(model, x, wc.argmax.weights(), g);
        return wc.value;
    };

    SolveResult res = run_engine(model, oracle, cfg, start);
    const WorstCase final_wc = worst_case(set, model.eval(res.x));
    return {std::move(res.x), final_wc.value, final_wc.argmax, res.iters};
}

JointResult minimize_cadro_joint(const CostModel& model, const CadroSet& set,
                                 const SolverConfig& cfg) {
    check_config(cfg);
    if (set.v.size() != model.n())
        throw std::invalid_argument("minimize_cadro_joint: set dimension mismatch");
    const std::size_t dim = model.dim_x();

    // Decision vector y = (x, lambda) with lambda kept in [0, kLambdaCap].
    const std::function<numvec(const numvec&)> project = [&](const numvec& y) {
        numvec x(y.begin(), y.begin() + dim);
        x = model.project(x);
        x.push_back(std::clamp(y[dim], 0.0, kLambdaCap));
        return x;
    };
    const std::function<double(const numvec&, numvec&)> oracle = [&](const numvec& y,
                                                                     numvec& g) {
        const numvec x(y.begin(), y.begin() + dim);
        const double lambda = y[dim];
        const numvec z = model.eval(x);
        std::size_t active = 0;
        double inner = z[0] - lambda * set.v[0];
        for (std::size_t i = 1; i < z.size(); ++i) {
            const double zi = z[i] - lambda * set.v[i];
            if (zi > inner) {
                inner = zi;
                active = i;
            }
        }
        g = model.subgrad(x, active);
        g.push_back(set.alpha - set.v[active]);
        return lambda * set.alpha + inner;
    };

    // Step scale from the model's box alone: the lambda cap is a safety
    // bound, not a natural problem scale.
    numvec x0 = model.initial_point();
    numvec probe_lo(dim), probe_hi(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        probe_lo[d] = x0[d] - 1e12;
        probe_hi[d] = x0[d] + 1e12;
    }
    probe_lo = model.project(probe_lo);
    probe_hi = model.project(probe_hi);
    double span = 0.0;
    for (std::size_t d = 0; d < dim; ++d)
        span += (probe_hi[d] - probe_lo[d]) * (probe_hi[d] - probe_lo[d]);
    const double radius = std::max(0.5 * std::sqrt(span), 1.0);

    numvec y0 = std::move(x0);
    y0.push_back(0.0);
    SolveResult res = Engine{project, oracle, cfg, radius}.run(y0);
    JointResult out;
    out.lambda = res.x[dim];
    out.value = res.value;
    out.x = std::move(res.x);
    out.x.resize(dim);
    // At a fixed x the objective is piecewise linear in lambda, so the
    // optimal multiplier for the returned iterate is available exactly;
    // polishing with it can only improve the (x, lambda) pair.
    double lam_star = 0.0;
    const double polished = cadro_worst_case_dual(set, model.eval(out.x), &lam_star);
    if (polished <= out.value && lam_star <= kLambdaCap) {
        out.lambda = lam_star;
        out.value = polished;
    }
    out.lambda_capped = out.lambda >= kLambdaCap * (1.0 - 1e-9);
    out.iters = res.iters;
    return out;
}

} // namespace cadro
