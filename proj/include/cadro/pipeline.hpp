/**
 * End-to-end solution pipelines over a dataset and a cost model:
 *
 *  - cadro_run: split the sample, train a candidate decision on the first
 *    part, project the second part through its cost vector, certify the
 *    mean with a high-confidence bound, and solve the DRO program over
 *    the induced cost-aware halfspace set;
 *  - saa_certified_run: same split and bound, but the returned decision
 *    is the trained candidate itself and the certificate is the bound;
 *  - d_dro_run: classical distance-ball DRO (TV / KL / transport) on the
 *    full sample with a concentration radius;
 *  - robust_run: worst case over the whole simplex (data-free).
 */
#pragma once

#include "cadro/bounds.hpp"
#include "cadro/solver.hpp"

namespace cadro {

enum class Method { cadro, saa, tv, kl, w, robust };

const std::string& method_name(Method method);
Method method_from_name(const std::string& name);

struct PipelineConfig {
    double beta = 0.01;                              ///< certificate failure probability
    double mu = 0.01;                                ///< split-fraction parameter (tau/m -> 0)
    double nu = 0.8;                                 ///< split-fraction limit (tau/m -> nu)
    BoundKind bound = BoundKind::ordered;            ///< mean bound for the certificate
    GammaMode gamma_mode = GammaMode::asymptotic;    ///< CDF band calibration
    SolverConfig solver;

    MeanBoundSpec bound_spec() const { return {bound, beta, gamma_mode}; }
};

/**
 * Training split size tau(m) = floor(mu * nu * m(m+1) / (mu m + nu)),
 * clamped to [1, m-1]; grows like nu * m with a vanishing early fraction.
 * Requires m >= 2.
 */
std::size_t tau_schedule(std::size_t m, double mu, double nu);

/// cadro_run with the intermediate artifacts exposed (coverage harness).
struct CadroRunDetail {
    RunResult result;
    numvec x_bar;   ///< trained candidate decision
    numvec v;       ///< its cost vector L(x_bar)
    double alpha;   ///< certified mean bound
};

CadroRunDetail cadro_run_detail(const Dataset& data, const CostModel& model,
                                const PipelineConfig& cfg);
RunResult cadro_run(const Dataset& data, const CostModel& model, const PipelineConfig& cfg);

RunResult saa_certified_run(const Dataset& data, const CostModel& model,
                            const PipelineConfig& cfg);

/**
 * Distance-ball DRO on the full sample.  kind must be tv, kl or w; the
 * transport variant needs the ground cost matrix.  radius_override forces
 * the ball radius (testing hook); pass a negative value for the
 * calibrated radius.
 */
RunResult d_dro_run(const Dataset& data, const CostModel& model, const PipelineConfig& cfg,
                    Method kind, const std::vector<numvec>* transport_ground_cost = nullptr,
                    double radius_override = -1.0);

RunResult robust_run(const CostModel& model, const PipelineConfig& cfg);

/// Dispatch one replication of any method on a drawn dataset.
RunResult run_method(Method method, const Dataset& data, const CostModel& model,
                     const PipelineConfig& cfg,
                     const std::vector<numvec>* transport_ground_cost = nullptr);

} // namespace cadro
