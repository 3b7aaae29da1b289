#include "cadro/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace cadro {

namespace {

void check_beta(double beta) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("beta must lie in (0, 1)");
}

void check_proj(const Projections& proj, std::size_t m) {
    if (proj.eta.empty())
        throw std::invalid_argument("mean bound: empty calibration sample");
    if (proj.eta.size() != m)
        throw std::invalid_argument("mean bound: m does not match |eta|");
}

} // namespace

MeanBoundSpec::MeanBoundSpec(BoundKind kind_in, double beta_in, GammaMode gamma_in)
    : kind(kind_in), beta(beta_in), gamma_mode(gamma_in) {
    check_beta(beta);
}

Projections project_sample(const Dataset& data, const numvec& v) {
    if (v.size() != data.n)
        throw std::invalid_argument("project_sample: |v| must equal data.n");
    const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
    Projections proj;
    proj.eta.reserve(data.size());
    for (std::size_t k : data.outcomes) proj.eta.push_back(v[k]);
    proj.eta_bar = *hi_it;
    proj.rg = *hi_it - *lo_it;
    return proj;
}

double hoeffding_radius(std::size_t m, double beta) {
    if (m == 0) throw std::invalid_argument("hoeffding_radius: m must be positive");
    check_beta(beta);
    return std::min(1.0, std::sqrt(std::log(1.0 / beta) / (2.0 * static_cast<double>(m))));
}

double hoeffding_bound(const Projections& proj, double p_hat_dot_v,
                       std::size_t m, double beta) {
    check_proj(proj, m);
    const double raw = p_hat_dot_v + hoeffding_radius(m, beta) * proj.rg;
    return std::min(raw, proj.eta_bar);
}

double ks_one_sided_tail(std::size_t m, double d) {
    if (m == 0) throw std::invalid_argument("ks_one_sided_tail: m must be positive");
    if (d <= 0.0) return 1.0;
    if (d >= 1.0) return 0.0;
    const double n = static_cast<double>(m);
    // P(D_m^+ >= d) = d * sum_{j=0}^{floor(m(1-d))} C(m,j) (j/m + d)^{j-1} (1 - j/m - d)^{m-j}.
    // Each term is a probability-sized quantity; compute its logarithm to
    // keep the binomial coefficient from overflowing at large m.
    std::vector<double> lgam(m + 2);
    lgam[0] = 0.0;
    for (std::size_t i = 1; i < lgam.size(); ++i)
        lgam[i] = lgam[i - 1] + std::log(static_cast<double>(i));
    const auto lchoose = [&](std::size_t j) {
        return lgam[m] - lgam[j] - lgam[m - j];
    };
    const std::size_t jmax = static_cast<std::size_t>(std::floor(n * (1.0 - d)));
    double tail = 0.0;
    for (std::size_t j = 0; j <= jmax && j <= m; ++j) {
        const double a = static_cast<double>(j) / n + d;        // > 0
        const double b = 1.0 - static_cast<double>(j) / n - d;  // >= 0 at j = jmax
        double log_term = std::log(d) + lchoose(j) +
                          (static_cast<double>(j) - 1.0) * std::log(a);
        if (b > 0.0) {
            log_term += (n - static_cast<double>(j)) * std::log(b);
        } else if (j != m) {
            continue;  // boundary term with a zero factor
        }
        tail += std::exp(log_term);
    }
    return std::min(1.0, tail);
}

double gamma_value(std::size_t m, double beta, GammaMode mode) {
    if (m == 0) throw std::invalid_argument("gamma_value: m must be positive");
    check_beta(beta);
    if (mode == GammaMode::asymptotic)
        return std::min(1.0, std::sqrt(std::log(1.0 / beta) / (2.0 * static_cast<double>(m))));
    // Exact mode: smallest gamma with P(D_m^+ >= gamma) <= beta.  The tail
    // is continuous and strictly decreasing on (0, 1), so bisect and keep
    // the feasible (upper) end of the bracket.
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (ks_one_sided_tail(m, mid) <= beta)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double ordered_mean_bound_at_gamma(const Projections& proj, std::size_t m, double gamma) {
    check_proj(proj, m);
    if (!(gamma >= 0.0)) throw std::invalid_argument("ordered mean bound: gamma must be >= 0");
    if (gamma >= 1.0) return proj.eta_bar;
    numvec eta = proj.eta;
    std::stable_sort(eta.begin(), eta.end());
    const double md = static_cast<double>(m);
    const std::size_t k = static_cast<std::size_t>(std::ceil(md * gamma));
    double bound = gamma * proj.eta_bar;
    if (k > 0)  // weight (k/m - gamma) on the k-th order statistic (1-based)
        bound += (static_cast<double>(k) / md - gamma) * eta[k - 1];
    for (std::size_t i = k; i < m; ++i) bound += eta[i] / md;
    return std::min(bound, proj.eta_bar);
}

double ordered_mean_bound(const Projections& proj, std::size_t m, double beta,
                          GammaMode mode) {
    return ordered_mean_bound_at_gamma(proj, m, gamma_value(m, beta, mode));
}

double mean_bound(const Projections& proj, std::size_t m, const MeanBoundSpec& spec) {
    check_beta(spec.beta);
    if (spec.kind == BoundKind::hoeffding) {
        double mean = 0.0;
        for (double e : proj.eta) mean += e;
        mean /= static_cast<double>(proj.eta.empty() ? 1 : proj.eta.size());
        return hoeffding_bound(proj, mean, m, spec.beta);
    }
    return ordered_mean_bound(proj, m, spec.beta, spec.gamma_mode);
}

} // namespace cadro
