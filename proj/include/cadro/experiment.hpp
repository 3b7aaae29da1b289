/**
 * Monte-Carlo experiment harness: runs a grid of (method, sample size,
 * replication) cells on a generated facility instance, each replication
 * on its own deterministic random stream, and emits per-run and summary
 * CSV tables.  Reruns with the same master seed produce byte-identical
 * output.
 */
#pragma once

#include "cadro/facility.hpp"
#include "cadro/pipeline.hpp"

#include <iosfwd>

namespace cadro {

struct ExperimentPlan {
    std::vector<Method> methods = {Method::cadro, Method::saa,    Method::tv,
                                   Method::kl,    Method::w,      Method::robust};
    std::vector<std::size_t> m_grid = {25, 50, 100, 200, 400, 800};
    std::size_t reps = 100;
    std::uint64_t master_seed = 1;
    PipelineConfig pipeline;
};

/// One completed replication.
struct ExperimentRow {
    Method method = Method::cadro;
    std::size_t m = 0;
    std::size_t rep = 0;
    std::uint64_t stream_id = 0;  ///< stream_id_for(method, m, rep)
    RunResult result;
};

/**
 * Run every (method, m, rep) cell of the plan.  Each cell draws its own
 * dataset from RngStream(master_seed, stream_id_for(method, m, rep)), so
 * cells are independent of execution order.  The data-free robust method
 * is solved once and replicated.  v_oos is filled against the instance's
 * true distribution.  Rows come back sorted by (method name, m, rep).
 */
std::vector<ExperimentRow> run_experiment(const FacilityInstance& instance,
                                          const ExperimentPlan& plan);

/**
 * Per-run table, one row per replication:
 *   method,m,rep,seed,v_hat,v_oos,v_star_saa,alpha_bound,tau,wall_time_ms
 * Floats use 12 significant digits.  wall_time_ms is written as 0 so that
 * reruns with the same master seed are byte-identical; measured times stay
 * available on RunResult::wall_time_ms.
 */
void write_rows_csv(const std::vector<ExperimentRow>& rows, std::ostream& os);

/**
 * Summary table, one row per (method, m) cell:
 * count plus mean / 0.05-quantile / 0.95-quantile / min / max of v_hat and
 * of v_oos.  Quantiles interpolate linearly between order statistics
 * (with a single replication every statistic equals that value).
 */
void write_summary_csv(const std::vector<ExperimentRow>& rows, std::ostream& os);

/**
 * Coverage audit of the certified pipeline: `reps` independent datasets
 * of size m, one full run each, counting how often the certificate fails
 * (out-of-sample cost above v_hat) and how often the true distribution
 * lies in the constructed ambiguity set.  Membership implies the
 * certificate holds up to numerical tolerance, so conditional_violations
 * should be zero.
 */
struct CoverageReport {
    std::size_t reps = 0;
    std::size_t violations = 0;              ///< v_oos > v_hat
    std::size_t member_count = 0;            ///< p_star in the run's ambiguity set
    std::size_t conditional_violations = 0;  ///< member and v_oos > v_hat + 1e-6

    double violation_rate() const {
        return reps == 0 ? 0.0 : static_cast<double>(violations) / static_cast<double>(reps);
    }
    double member_rate() const {
        return reps == 0 ? 0.0 : static_cast<double>(member_count) / static_cast<double>(reps);
    }
};

CoverageReport run_coverage(const FacilityInstance& instance, std::size_t m, std::size_t reps,
                            std::uint64_t master_seed, const PipelineConfig& cfg);

} // namespace cadro
