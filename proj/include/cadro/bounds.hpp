/**
 * High-confidence upper bounds on the mean <p*, v> of a bounded discrete
 * cost projection, computed from an i.i.d. calibration sample.
 *
 * Two bounds are provided, both valid at confidence level 1 - beta:
 *
 *  - Hoeffding:  mean(eta) + r * rg(v)   with r = min{1, sqrt(log(1/beta) / (2m))},
 *  - Ordered:    (k/m - gamma) eta_(k) + sum_{i>k} eta_(i)/m + gamma * max(v)
 *                with k = ceil(m * gamma), based on a one-sided
 *                empirical-CDF band of width gamma.
 *
 * gamma comes either from the asymptotic square-root formula or from the
 * exact finite-sample one-sided Kolmogorov-Smirnov critical value.
 */
#pragma once

#include "cadro/core.hpp"

namespace cadro {

/// How the one-sided CDF band width gamma is calibrated.
enum class GammaMode {
    asymptotic, ///< min{1, sqrt(log(1/beta) / (2m))}
    exact_ks    ///< exact one-sided KS critical value at level beta
};

/// Which mean bound the pipeline certifies with.
enum class BoundKind { hoeffding, ordered };

/// Bound selection plus its confidence parameters.
struct MeanBoundSpec {
    BoundKind kind = BoundKind::ordered;
    double beta = 0.01;
    GammaMode gamma_mode = GammaMode::asymptotic;

    MeanBoundSpec() = default;
    MeanBoundSpec(BoundKind kind_in, double beta_in,
                  GammaMode gamma_in = GammaMode::asymptotic);
};

/**
 * Scalar projections eta_k = v[xi_k] of a sample through a cost vector v,
 * together with the maximum and range of v over *all* n coordinates
 * (observed or not), which bound the support of the projected variable.
 */
struct Projections {
    numvec eta;      ///< projected sample, in dataset order
    double eta_bar;  ///< max_i v_i
    double rg;       ///< max_i v_i - min_i v_i
};

/// Project a sample through v; requires |v| = data.n.
Projections project_sample(const Dataset& data, const numvec& v);

/// Hoeffding radius r = min{1, sqrt(log(1/beta) / (2m))}.
double hoeffding_radius(std::size_t m, double beta);

/**
 * Hoeffding mean bound mean + r * rg, clamped above by eta_bar
 * (no distribution on the support can have a larger mean).
 * p_hat_dot_v is the empirical mean of the projections.
 */
double hoeffding_bound(const Projections& proj, double p_hat_dot_v,
                       std::size_t m, double beta);

/**
 * Exact tail P(D_m^+ >= d) of the one-sided Kolmogorov-Smirnov statistic
 * for sample size m (Birnbaum-Tingey series, evaluated in log space).
 */
double ks_one_sided_tail(std::size_t m, double d);

/// CDF band width gamma for the ordered mean bound, per the chosen mode.
double gamma_value(std::size_t m, double beta, GammaMode mode);

/**
 * Ordered mean bound at an explicitly supplied gamma (test hook and
 * building block).  Sorts eta ascending; gamma >= 1 degenerates to
 * eta_bar; the result is clamped above by eta_bar.
 */
double ordered_mean_bound_at_gamma(const Projections& proj, std::size_t m, double gamma);

/// Ordered mean bound with gamma = gamma_value(m, beta, mode).
double ordered_mean_bound(const Projections& proj, std::size_t m, double beta,
                          GammaMode mode = GammaMode::asymptotic);

/// Dispatch on spec.kind; m is the calibration sample size.
double mean_bound(const Projections& proj, std::size_t m, const MeanBoundSpec& spec);

} // namespace cadro
