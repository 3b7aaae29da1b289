/**
 * Projected subgradient solvers for the decision problems built on a
 * CostModel: expected cost under a fixed distribution, worst-case cost
 * over the simplex (robust), worst-case cost over an ambiguity set (DRO),
 * and the joint (x, lambda) form of the cost-aware DRO program.
 *
 * All solvers are deterministic: fixed starting point, normalized
 * subgradient directions with a c/sqrt(t) schedule for the first part of
 * the budget, then a geometric step decay restarted from the best iterate
 * to polish; the best feasible iterate is returned with its value
 * recomputed by the exact oracle.
 */
#pragma once

#include "cadro/ambiguity.hpp"
#include "cadro/core.hpp"

namespace cadro {

/// Which iterate a solver reports.
enum class Averaging { last, best, average };

struct SolverConfig {
    std::size_t max_iters = 20000;  ///< total subgradient steps (>= 1)
    double step_c = 1.0;            ///< step scale, multiplied by the feasible-set radius (> 0)
    double tol = 1e-9;              ///< objective-stall tolerance (> 0)
    Averaging averaging = Averaging::best;
};

struct SolveResult {
    numvec x;
    double value = 0.0;
    std::size_t iters = 0;
};

/// DRO solve result: decision, value, and the inner worst-case distribution.
struct DroResult {
    numvec x;
    double value = 0.0;
    ProbVector worst_p;
    std::size_t iters = 0;
};

/// Joint cost-aware DRO solve over (x, lambda).
struct JointResult {
    numvec x;
    double lambda = 0.0;
    double value = 0.0;
    bool lambda_capped = false;
    std::size_t iters = 0;
};

/// Upper cap for the dual variable in the joint solver.
inline constexpr double kLambdaCap = 1e6;

/// min_x <p, L(x)> over the model's feasible set.
SolveResult minimize_expected(const CostModel& model, const ProbVector& p,
                              const SolverConfig& cfg, const numvec* start = nullptr);

/// min_x max_i l_i(x): robust baseline (worst case over the whole simplex).
SolveResult minimize_robust(const CostModel& model, const SolverConfig& cfg);

/// min_x max_{p in set} <p, L(x)> via the exact inner oracle.
DroResult minimize_dro(const CostModel& model, const AmbiguitySet& set,
                       const SolverConfig& cfg, const numvec* start = nullptr);

/**
 * Joint form of the cost-aware DRO program:
 *   min_{x, lambda >= 0}  lambda * alpha + max_i (l_i(x) - lambda * v_i).
 * Must agree with minimize_dro on the equivalent CadroSet.
 */
JointResult minimize_cadro_joint(const CostModel& model, const CadroSet& set,
                                 const SolverConfig& cfg);

} // namespace cadro
