#include "cadro/ambiguity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cadro {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_beta_param(double beta) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("beta must lie in (0, 1)");
}

std::size_t argmax_index(const numvec& z) {
    // Smallest index among maximizers, for deterministic tie handling.
    std::size_t best = 0;
    for (std::size_t i = 1; i < z.size(); ++i)
        if (z[i] > z[best]) best = i;
    return best;
}

numvec sparse_pair(std::size_t n, std::size_t i, double wi, std::size_t j, double wj) {
    numvec w(n, 0.0);
    w[i] += wi;
    w[j] += wj;
    return w;
}

} // namespace

CadroSet::CadroSet(numvec v_in, double alpha_in) : v(std::move(v_in)), alpha(alpha_in) {
    if (v.empty()) throw std::invalid_argument("CadroSet: empty cost vector");
    const double vmin = *std::min_element(v.begin(), v.end());
    if (!(alpha >= vmin - kMembershipTol))
        throw std::invalid_argument("CadroSet: alpha below min v makes the set empty");
}

TvBall::TvBall(ProbVector center_in, double radius_in)
    : center(std::move(center_in)), radius(radius_in) {
    if (!(radius >= 0.0)) throw std::invalid_argument("TvBall: radius must be >= 0");
    radius = std::min(radius, 2.0);  // TV diameter of the simplex
}

KlBall::KlBall(ProbVector center_in, double radius_in)
    : center(std::move(center_in)), radius(radius_in) {
    if (!(radius >= 0.0)) throw std::invalid_argument("KlBall: radius must be >= 0");
    if (radius > 0.0)
        for (std::size_t i = 0; i < center.dim(); ++i)
            if (center[i] <= 0.0)
                throw std::invalid_argument("KlBall: positive radius requires a strictly positive center");
}

WBall::WBall(ProbVector center_in, std::vector<numvec> cost_in, double radius_in)
    : center(std::move(center_in)), cost(std::move(cost_in)), radius(radius_in) {
    const std::size_t n = center.dim();
    if (!(radius >= 0.0)) throw std::invalid_argument("WBall: radius must be >= 0");
    if (cost.size() != n) throw std::invalid_argument("WBall: cost matrix must be n x n");
    for (std::size_t i = 0; i < n; ++i) {
        if (cost[i].size() != n) throw std::invalid_argument("WBall: cost matrix must be n x n");
        if (!(std::abs(cost[i][i]) <= 1e-12))
            throw std::invalid_argument("WBall: cost matrix must have a zero diagonal");
        for (std::size_t j = 0; j < n; ++j) {
            if (!(cost[i][j] >= 0.0) || !std::isfinite(cost[i][j]))
                throw std::invalid_argument("WBall: cost entries must be finite and >= 0");
            max_cost_ = std::max(max_cost_, cost[i][j]);
        }
    }
    const double sym_tol = 1e-9 * std::max(1.0, max_cost_);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(cost[i][j] - cost[j][i]) > sym_tol)
                throw std::invalid_argument("WBall: cost matrix must be symmetric");
    // Per-source destination order by descending cost = ascending line slope
    // in the dual envelope; depends only on K, so build it once.
    dest_order_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        dest_order_[i].resize(n);
        std::iota(dest_order_[i].begin(), dest_order_[i].end(), std::size_t{0});
        std::stable_sort(dest_order_[i].begin(), dest_order_[i].end(),
                         [&](std::size_t a, std::size_t b) { return cost[i][a] > cost[i][b]; });
    }
}

FullSimplex::FullSimplex(std::size_t n_in) : n(n_in) {
    if (n == 0) throw std::invalid_argument("FullSimplex: n must be positive");
}

WorstCase cadro_worst_case(const CadroSet& set, const numvec& z) {
    const std::size_t n = set.v.size();
    if (z.size() != n) throw std::invalid_argument("cadro_worst_case: |z| must equal |v|");
    const numvec& v = set.v;
    const double vmin = *std::min_element(v.begin(), v.end());
    const double alpha = std::max(set.alpha, vmin);

    double best = -kInf;
    std::size_t bi = 0, bj = 0;
    double bt = 1.0;  // weight on coordinate bi
    // Feasible point masses.
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i] <= alpha && z[i] > best) {
            best = z[i];
            bi = bj = i;
            bt = 1.0;
        }
    }
    // Budget-tight mixtures of two coordinates.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (v[i] == v[j]) continue;  // never tight in the interior
            const double t = (alpha - v[j]) / (v[i] - v[j]);
            if (!(t > 0.0 && t < 1.0)) continue;
            const double val = t * z[i] + (1.0 - t) * z[j];
            if (val > best) {
                best = val;
                bi = i;
                bj = j;
                bt = t;
            }
        }
    }
    return {best, ProbVector(sparse_pair(n, bi, bt, bj, 1.0 - bt))};
}

double cadro_worst_case_dual(const CadroSet& set, const numvec& z, double* lambda_out) {
    const std::size_t n = set.v.size();
    if (z.size() != n) throw std::invalid_argument("cadro_worst_case_dual: |z| must equal |v|");
    const numvec& v = set.v;
    const double vmin = *std::min_element(v.begin(), v.end());
    const double alpha = std::max(set.alpha, vmin);

    const auto dual_value = [&](double lam) {
        double inner = -kInf;
        for (std::size_t i = 0; i < n; ++i) inner = std::max(inner, z[i] - lam * v[i]);
        return lam * alpha + inner;
    };
    // The dual is convex piecewise linear with kinks where the inner argmax
    // changes, i.e. at pairwise line intersections; the minimum sits on a
    // kink or at lambda = 0 (past the last kink the slope is alpha - vmin >= 0,
    // so no improvement lies beyond it).
    double best = dual_value(0.0);
    double best_lam = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (v[i] == v[j]) continue;
            const double lam = (z[i] - z[j]) / (v[i] - v[j]);
            if (!(lam > 0.0) || !std::isfinite(lam)) continue;
            const double val = dual_value(lam);
            if (val < best) {
                best = val;
                best_lam = lam;
            }
        }
    }
    if (lambda_out) *lambda_out = best_lam;
    return best;
}

WorstCase tv_worst_case(const TvBall& set, const numvec& z) {
    const std::size_t n = set.center.dim();
    if (z.size() != n) throw std::invalid_argument("tv_worst_case: |z| must equal the ball dimension");
    numvec p = set.center.weights();
    const std::size_t target = argmax_index(z);
    // Half the TV budget can be moved onto the best coordinate; drain the
    // cheapest coordinates first.
    double moved = std::min(set.radius / 2.0, 1.0 - p[target]);
    p[target] += moved;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return z[a] < z[b]; });
    for (std::size_t k : order) {
        if (moved <= 0.0) break;
        if (k == target) continue;
        const double take = std::min(p[k], moved);
        p[k] -= take;
        moved -= take;
    }
    ProbVector argmax(std::move(p));
    return {dot(argmax, z), std::move(argmax)};
}

WorstCase kl_worst_case(const KlBall& set, const numvec& z, const KlOracleOptions& opts) {
    const std::size_t n = set.center.dim();
    if (z.size() != n) throw std::invalid_argument("kl_worst_case: |z| must equal the ball dimension");
    const ProbVector& c = set.center;
    const double r = set.radius;
    if (opts.lambda_out) *opts.lambda_out = 0.0;

    const double zmax = *std::max_element(z.begin(), z.end());
    const double zmin = *std::min_element(z.begin(), z.end());
    if (r == 0.0 || zmax == zmin) return {dot(c, z), c};

    // Total center mass on the argmax coordinates: if the ball reaches the
    // distribution concentrated there, the optimum is flat-out zmax.
    double top_mass = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (z[i] == zmax) top_mass += c[i];
    if (r >= -std::log(top_mass)) {
        numvec w(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            if (z[i] == zmax) w[i] = c[i] / top_mass;
        return {zmax, ProbVector(std::move(w))};
    }

    // Derivative of the dual lambda*r + lambda*log sum_i c_i exp(z_i/lambda)
    // is r - KL(q(lambda) || c) with q the exponential tilt; it is negative
    // at 0+, tends to r > 0, and the dual is convex: bisect for the root.
    numvec w(n);
    const auto tilt = [&](double lam, double& kl_out, double& val_out) {
        double s0 = 0.0, s1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = c[i] * std::exp((z[i] - zmax) / lam);
            s0 += w[i];
            s1 += w[i] * z[i];
        }
        val_out = s1 / s0;
        kl_out = (val_out - zmax) / lam - std::log(s0);
    };
    const auto deriv = [&](double lam) {
        double kl, val;
        tilt(lam, kl, val);
        return r - kl;
    };

    double lo, hi;
    if (opts.lambda_hint && *opts.lambda_hint > 0.0) {
        lo = *opts.lambda_hint / 4.0;
        hi = *opts.lambda_hint * 4.0;
    } else {
        lo = 1e-3;
        hi = 1.0;
    }
    int guard = 0;
    while (deriv(lo) >= 0.0 && guard++ < 1200) lo /= 2.0;
    guard = 0;
    while (deriv(hi) <= 0.0 && guard++ < 1200) hi *= 2.0;
    while (hi - lo > opts.lambda_tol) {
        const double mid = 0.5 * (lo + hi);
        if (deriv(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    // The upper end of the bracket has KL(q || c) <= r: return that tilt so
    // the reported argmax is always a member of the ball.
    double kl, val;
    tilt(hi, kl, val);
    if (opts.lambda_out) *opts.lambda_out = hi;
    double s0 = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& wi : w) wi /= s0;
    return {val, ProbVector(std::move(w))};
}

WorstCase w_worst_case(const WBall& set, const numvec& z) {
    const std::size_t n = set.center.dim();
    if (z.size() != n) throw std::invalid_argument("w_worst_case: |z| must equal the ball dimension");
    const ProbVector& c = set.center;
    const double r = set.radius;

    // Everything is reachable once the budget covers the largest ground cost.
    if (r >= set.max_cost()) {
        const std::size_t t = argmax_index(z);
        return {z[t], ProbVector::basis(n, t)};
    }

    // Per-source upper envelopes of the lines j: lambda -> z_j - lambda K_ij,
    // built with destinations presorted by ascending slope (descending cost).
    struct Envelope {
        std::vector<std::size_t> dest;  // destination per segment
        numvec slope;                   // -K[i][dest]
        numvec bp;                      // breakpoints between segments
    };
    std::vector<Envelope> envs(n);
    struct Event {
        double lambda;
        std::size_t src;
        std::size_t seg;  // transition seg -> seg+1 of envs[src]
    };
    std::vector<Event> events;

    for (std::size_t i = 0; i < n; ++i) {
        Envelope& e = envs[i];
        e.dest.reserve(8);
        e.slope.reserve(8);
        for (std::size_t j : set.dest_order(i)) {
            const double s = -set.cost[i][j];
            const double b = z[j];
            // Drop dominated lines; equal slopes keep the larger intercept.
            while (!e.dest.empty()) {
                const double st = e.slope.back();
                const double bt = z[e.dest.back()];
                if (s == st) {
                    if (b <= bt) goto skip_line;
                    e.dest.pop_back();
                    e.slope.pop_back();
                    if (!e.bp.empty()) e.bp.pop_back();
                    continue;
                }
                if (e.dest.size() >= 2) {
                    // New line meets the second-from-top no later than the
                    // top does: the top never surfaces.
                    const double s2 = e.slope[e.dest.size() - 2];
                    const double b2 = z[e.dest[e.dest.size() - 2]];
                    const double x_new = (b2 - b) / (s - s2);
                    if (x_new <= e.bp.back()) {
                        e.dest.pop_back();
                        e.slope.pop_back();
                        e.bp.pop_back();
                        continue;
                    }
                }
                break;
            }
            if (!e.dest.empty()) e.bp.push_back((z[e.dest.back()] - b) / (s - e.slope.back()));
            e.dest.push_back(j);
            e.slope.push_back(s);
        skip_line:;
        }
        const std::size_t first = static_cast<std::size_t>(
            std::upper_bound(e.bp.begin(), e.bp.end(), 0.0) - e.bp.begin());
        for (std::size_t k = first; k < e.bp.size(); ++k)
            events.push_back({e.bp[k], i, k});
    }

    // Segment active just above lambda.
    const auto seg_above = [&](std::size_t i, double lam) {
        const Envelope& e = envs[i];
        return static_cast<std::size_t>(std::upper_bound(e.bp.begin(), e.bp.end(), lam) -
                                        e.bp.begin());
    };
    const auto seg_below = [&](std::size_t i, double lam) {
        const Envelope& e = envs[i];
        return static_cast<std::size_t>(std::lower_bound(e.bp.begin(), e.bp.end(), lam) -
                                        e.bp.begin());
    };

    // Sweep the merged breakpoints; stop when the dual slope turns >= 0.
    double slope_total = r;
    for (std::size_t i = 0; i < n; ++i) slope_total += c[i] * envs[i].slope[seg_above(i, 0.0)];
    double lam_star = 0.0;
    if (slope_total < 0.0) {
        std::sort(events.begin(), events.end(),
                  [](const Event& a, const Event& b) { return a.lambda < b.lambda; });
        std::size_t k = 0;
        while (k < events.size()) {
            const double lam = events[k].lambda;
            while (k < events.size() && events[k].lambda == lam) {
                const Event& ev = events[k];
                slope_total += c[ev.src] * (envs[ev.src].slope[ev.seg + 1] -
                                            envs[ev.src].slope[ev.seg]);
                ++k;
            }
            if (slope_total >= 0.0) {
                lam_star = lam;
                break;
            }
        }
        if (slope_total < 0.0 && !events.empty()) lam_star = events.back().lambda;
    }

    numvec p(n, 0.0);
    double value = 0.0;
    if (lam_star == 0.0) {
        // Budget is slack: every source ships to its best destination.
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = envs[i].dest[seg_above(i, 0.0)];
            p[j] += c[i];
            value += c[i] * z[j];
        }
    } else {
        // Mix the assignments active just below and just above lambda* so the
        // transport budget is exactly r (complementary slackness).
        double cost_lo = 0.0, cost_hi = 0.0, val_lo = 0.0, val_hi = 0.0;
        std::vector<std::size_t> jlo(n), jhi(n);
        for (std::size_t i = 0; i < n; ++i) {
            jlo[i] = envs[i].dest[seg_below(i, lam_star)];
            jhi[i] = envs[i].dest[seg_above(i, lam_star)];
            cost_lo += c[i] * set.cost[i][jlo[i]];
            cost_hi += c[i] * set.cost[i][jhi[i]];
            val_lo += c[i] * z[jlo[i]];
            val_hi += c[i] * z[jhi[i]];
        }
        double theta = 0.0;
        if (cost_lo > cost_hi) theta = std::clamp((r - cost_hi) / (cost_lo - cost_hi), 0.0, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            p[jlo[i]] += theta * c[i];
            p[jhi[i]] += (1.0 - theta) * c[i];
        }
        value = theta * val_lo + (1.0 - theta) * val_hi;
    }
    return {value, ProbVector(std::move(p))};
}

WorstCase simplex_worst_case(const FullSimplex& set, const numvec& z) {
    if (z.size() != set.n)
        throw std::invalid_argument("simplex_worst_case: |z| must equal n");
    const std::size_t t = argmax_index(z);
    return {z[t], ProbVector::basis(set.n, t)};
}

WorstCase worst_case(const AmbiguitySet& set, const numvec& z) {
    return std::visit(
        [&](const auto& s) -> WorstCase {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CadroSet>) return cadro_worst_case(s, z);
            else if constexpr (std::is_same_v<T, TvBall>) return tv_worst_case(s, z);
            else if constexpr (std::is_same_v<T, KlBall>) return kl_worst_case(s, z);
            else if constexpr (std::is_same_v<T, WBall>) return w_worst_case(s, z);
            else return simplex_worst_case(s, z);
        },
        set);
}

bool contains(const AmbiguitySet& set, const ProbVector& p) {
    return std::visit(
        [&](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CadroSet>) {
                if (p.dim() != s.v.size()) return false;
                return dot(p, s.v) <= s.alpha + kMembershipTol;
            } else if constexpr (std::is_same_v<T, TvBall>) {
                if (p.dim() != s.center.dim()) return false;
                double l1 = 0.0;
                for (std::size_t i = 0; i < p.dim(); ++i)
                    l1 += std::abs(p[i] - s.center[i]);
                return l1 <= s.radius + kMembershipTol;
            } else if constexpr (std::is_same_v<T, KlBall>) {
                if (p.dim() != s.center.dim()) return false;
                return kl_divergence(p, s.center) <= s.radius + kMembershipTol;
            } else if constexpr (std::is_same_v<T, WBall>) {
                if (p.dim() != s.center.dim()) return false;
                return transport_cost(s.center, p, s.cost) <= s.radius + kMembershipTol;
            } else {
                return p.dim() == s.n;
            }
        },
        set);
}

std::size_t set_dim(const AmbiguitySet& set) {
    return std::visit(
        [](const auto& s) -> std::size_t {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CadroSet>) return s.v.size();
            else if constexpr (std::is_same_v<T, FullSimplex>) return s.n;
            else return s.center.dim();
        },
        set);
}

double tv_radius(std::size_t n, std::size_t m, double beta) {
    if (n == 0) throw std::invalid_argument("tv_radius: n must be positive");
    if (m == 0) throw std::invalid_argument("tv_radius: m must be positive");
    check_beta_param(beta);
    if (n < 2) return 0.0;  // the simplex is a single point
    // log(2^n - 2) without forming 2^n.
    const double log_card =
        static_cast<double>(n) * std::log(2.0) + std::log1p(-std::exp2(1.0 - static_cast<double>(n)));
    const double raw =
        std::sqrt(2.0 / static_cast<double>(m) * (log_card + std::log(1.0 / beta)));
    return std::min(2.0, raw);
}

double kl_radius(std::size_t n, std::size_t m, double beta) {
    if (n == 0) throw std::invalid_argument("kl_radius: n must be positive");
    if (m == 0) throw std::invalid_argument("kl_radius: m must be positive");
    check_beta_param(beta);
    return (static_cast<double>(n) * std::log(static_cast<double>(m) + 1.0) +
            std::log(1.0 / beta)) /
           static_cast<double>(m);
}

double w_radius(const std::vector<numvec>& cost, std::size_t n, std::size_t m, double beta) {
    double max_cost = 0.0;
    for (const numvec& row : cost)
        for (double k : row) max_cost = std::max(max_cost, k);
    return max_cost * tv_radius(n, m, beta);
}

double kl_divergence(const ProbVector& p, const ProbVector& q) {
    if (p.dim() != q.dim()) throw std::invalid_argument("kl_divergence: dimension mismatch");
    double kl = 0.0;
    for (std::size_t i = 0; i < p.dim(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) return kInf;
        kl += p[i] * std::log(p[i] / q[i]);
    }
    return std::max(0.0, kl);
}

double transport_cost(const ProbVector& a, const ProbVector& b,
                      const std::vector<numvec>& cost) {
    const std::size_t n = a.dim();
    if (b.dim() != n || cost.size() != n)
        throw std::invalid_argument("transport_cost: dimension mismatch");
    for (const numvec& row : cost)
        if (row.size() != n) throw std::invalid_argument("transport_cost: cost matrix must be n x n");

    constexpr double kMassTol = 1e-15;
    numvec supply = a.weights(), demand = b.weights();
    std::vector<numvec> flow(n, numvec(n, 0.0));
    numvec pot_src(n, 0.0), pot_dst(n, 0.0);

    // Successive shortest augmenting paths with Johnson potentials on the
    // dense bipartite graph; each round is a plain O(n^2) Dijkstra.
    const std::size_t max_rounds = 8 * n * n + 16;
    for (std::size_t round = 0; round < max_rounds; ++round) {
        double supply_left = 0.0;
        for (double s : supply) supply_left += s;
        if (supply_left <= kMassTol) break;

        numvec dist_src(n, kInf), dist_dst(n, kInf);
        std::vector<std::size_t> parent_dst(n, n);  // source feeding each sink
        std::vector<std::size_t> parent_src(n, n);  // sink feeding each source (backward arc)
        std::vector<bool> done_src(n, false), done_dst(n, false);
        for (std::size_t i = 0; i < n; ++i)
            if (supply[i] > kMassTol) dist_src[i] = 0.0;

        for (;;) {
            // Pick the unfinished node with the smallest tentative distance.
            double best = kInf;
            std::size_t node = 2 * n;
            for (std::size_t i = 0; i < n; ++i)
                if (!done_src[i] && dist_src[i] < best) { best = dist_src[i]; node = i; }
            for (std::size_t j = 0; j < n; ++j)
                if (!done_dst[j] && dist_dst[j] < best) { best = dist_dst[j]; node = n + j; }
            if (node == 2 * n) break;
            if (node < n) {
                const std::size_t i = node;
                done_src[i] = true;
                for (std::size_t j = 0; j < n; ++j) {
                    if (done_dst[j]) continue;
                    const double rc = std::max(0.0, cost[i][j] + pot_src[i] - pot_dst[j]);
                    if (dist_src[i] + rc < dist_dst[j]) {
                        dist_dst[j] = dist_src[i] + rc;
                        parent_dst[j] = i;
                    }
                }
            } else {
                const std::size_t j = node - n;
                done_dst[j] = true;
                for (std::size_t i = 0; i < n; ++i) {
                    if (done_src[i] || flow[i][j] <= 0.0) continue;
                    const double rc = std::max(0.0, pot_dst[j] - pot_src[i] - cost[i][j]);
                    if (dist_dst[j] + rc < dist_src[i]) {
                        dist_src[i] = dist_dst[j] + rc;
                        parent_src[i] = j;
                    }
                }
            }
        }

        std::size_t sink = n;
        double best = kInf;
        for (std::size_t j = 0; j < n; ++j)
            if (demand[j] > kMassTol && dist_dst[j] < best) { best = dist_dst[j]; sink = j; }
        if (sink == n) throw std::runtime_error("transport_cost: no augmenting path");

        // Trace back to a supply node, find the bottleneck, then augment.
        double delta = demand[sink];
        std::size_t j = sink;
        for (;;) {
            const std::size_t i = parent_dst[j];
            if (parent_src[i] == n) { delta = std::min(delta, supply[i]); break; }
            delta = std::min(delta, flow[i][parent_src[i]]);
            j = parent_src[i];
        }
        j = sink;
        for (;;) {
            const std::size_t i = parent_dst[j];
            flow[i][j] += delta;
            if (parent_src[i] == n) { supply[i] -= delta; break; }
            flow[i][parent_src[i]] -= delta;
            j = parent_src[i];
        }
        demand[sink] -= delta;

        const double reach = dist_dst[sink];
        for (std::size_t i = 0; i < n; ++i)
            pot_src[i] += std::min(dist_src[i], reach);
        for (std::size_t k = 0; k < n; ++k)
            pot_dst[k] += std::min(dist_dst[k], reach);
    }

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) total += flow[i][j] * cost[i][j];
    return total;
}

} // namespace cadro
