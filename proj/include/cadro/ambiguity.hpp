/**
 * Ambiguity sets over the n-point simplex and their exact worst-case
 * expectation oracles max_{p in A} <p, z>:
 *
 *  - CadroSet:    A = {p : <p, v> <= alpha}, the cost-aware halfspace cut;
 *  - TvBall:      total-variation ball ||p - c||_1 <= r;
 *  - KlBall:      Kullback-Leibler ball KL(p || c) <= r;
 *  - WBall:       discrete optimal-transport ball W_K(c, p) <= r;
 *  - FullSimplex: the whole simplex (robust baseline).
 *
 * Every oracle returns the exact optimum together with an argmax that is
 * a member of its set; radii calibrated from sample size and confidence
 * are provided for the three distance balls.
 */
#pragma once

#include <optional>
#include <variant>

#include "cadro/core.hpp"

namespace cadro {

/// Worst-case oracle result: the optimal value and a maximizer inside the set.
struct WorstCase {
    double value;
    ProbVector argmax;
};

/**
 * Cost-aware ambiguity set {p in Delta_n : <p, v> <= alpha}.
 * Nonempty iff alpha >= min_i v_i; construction rejects smaller alpha
 * (beyond the membership tolerance).
 */
struct CadroSet {
    numvec v;
    double alpha;

    CadroSet(numvec v_in, double alpha_in);
    std::size_t dim() const noexcept { return v.size(); }
};

/// Total-variation ball; radii above the TV diameter 2 are clamped.
struct TvBall {
    ProbVector center;
    double radius;

    TvBall(ProbVector center_in, double radius_in);
};

/// KL ball {p : KL(p || center) <= radius}; a positive radius requires a
/// strictly positive center (otherwise mass can never leave the support).
struct KlBall {
    ProbVector center;
    double radius;

    KlBall(ProbVector center_in, double radius_in);
};

/**
 * Optimal-transport ball {p : W_K(center, p) <= radius} where W_K is the
 * minimal transport cost between the marginals under the ground cost K
 * (symmetric, nonnegative, zero diagonal).
 */
struct WBall {
    ProbVector center;
    std::vector<numvec> cost;
    double radius;

    WBall(ProbVector center_in, std::vector<numvec> cost_in, double radius_in);

    /// Largest ground-cost entry; radii at or above it make the ball the whole simplex.
    double max_cost() const noexcept { return max_cost_; }
    /// Destination indices sorted by descending cost from source i (built once).
    const std::vector<std::size_t>& dest_order(std::size_t i) const { return dest_order_[i]; }

private:
    double max_cost_ = 0.0;
    std::vector<std::vector<std::size_t>> dest_order_;
};

/// The whole simplex on n outcomes.
struct FullSimplex {
    std::size_t n;

    explicit FullSimplex(std::size_t n_in);
};

using AmbiguitySet = std::variant<CadroSet, TvBall, KlBall, WBall, FullSimplex>;

/**
 * Exact maximizer of <p, z> over {p in Delta : <p, v> <= alpha} by
 * enumeration of the vertex set (supports of size <= 2): all feasible
 * point masses plus, per coordinate pair, the point where the budget
 * constraint is tight.  O(n^2).
 */
WorstCase cadro_worst_case(const CadroSet& set, const numvec& z);

/**
 * The same optimum through the dual route
 *   min_{lambda >= 0} lambda * alpha + max_i (z_i - lambda v_i),
 * minimized exactly over the finite breakpoint set.  Used as the
 * independent cross-check of cadro_worst_case and as the exact
 * lambda-polish of the joint solver; the minimizing multiplier is
 * written to lambda_out when provided.
 */
double cadro_worst_case_dual(const CadroSet& set, const numvec& z,
                             double* lambda_out = nullptr);

/**
 * TV-ball oracle: moves mass min{r/2, available} onto the best coordinate,
 * draining the cheapest coordinates first.  Exact for the L1 geometry.
 */
WorstCase tv_worst_case(const TvBall& set, const numvec& z);

/// Options for the KL oracle's one-dimensional dual solve.
struct KlOracleOptions {
    double lambda_tol = 1e-10;           ///< bisection width target
    std::optional<double> lambda_hint;   ///< warm bracket around a previous solution
    double* lambda_out = nullptr;        ///< optimal dual variable, if wanted
};

/**
 * KL-ball oracle.  Short-circuits the vacuous cases, otherwise solves
 *   min_{lambda > 0} lambda r + lambda log sum_i c_i exp(z_i / lambda)
 * by bisection on the derivative and returns the exponentially tilted
 * primal distribution from the feasible side of the bracket.
 */
WorstCase kl_worst_case(const KlBall& set, const numvec& z,
                        const KlOracleOptions& opts = {});

/**
 * Transport-ball oracle via the exact dual
 *   min_{lambda >= 0} lambda r + sum_i c_i max_j (z_j - lambda K_ij),
 * minimized over the merged breakpoints of the per-source upper envelopes;
 * the primal transport plan is recovered with a tight budget.
 */
WorstCase w_worst_case(const WBall& set, const numvec& z);

/// Robust oracle: max_i z_i attained at a point mass.
WorstCase simplex_worst_case(const FullSimplex& set, const numvec& z);

/// Oracle dispatch over the variant.
WorstCase worst_case(const AmbiguitySet& set, const numvec& z);

/// Membership test with absolute tolerance 1e-9 on the defining inequality.
bool contains(const AmbiguitySet& set, const ProbVector& p);

/// Number of outcomes the set lives on.
std::size_t set_dim(const AmbiguitySet& set);

/**
 * TV radius from the L1 concentration of the empirical distribution:
 * min{2, sqrt((2/m) log((2^n - 2) / beta))}, evaluated in log space.
 */
double tv_radius(std::size_t n, std::size_t m, double beta);

/// KL radius from the method-of-types bound: (n log(m+1) + log(1/beta)) / m.
double kl_radius(std::size_t n, std::size_t m, double beta);

/// Transport radius max_ij K_ij * tv_radius(n, m, beta).
double w_radius(const std::vector<numvec>& cost, std::size_t n, std::size_t m, double beta);

/// KL divergence sum_i p_i log(p_i / q_i); +inf when p charges a null set of q.
double kl_divergence(const ProbVector& p, const ProbVector& q);

/**
 * Exact minimal transport cost between marginals a and b under ground
 * cost K (successive shortest paths).  Used by WBall membership.
 */
double transport_cost(const ProbVector& a, const ProbVector& b,
                      const std::vector<numvec>& cost);

} // namespace cadro
