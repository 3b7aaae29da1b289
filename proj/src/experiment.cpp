#include "cadro/experiment.hpp"

#include "cadro/ambiguity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace cadro {

namespace {

/// Format a double with 12 significant digits (CSV contract).
std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

/// Linear interpolation between order statistics of a sorted vector.
double quantile_sorted(const numvec& sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
    const double h = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

struct SummaryStats {
    double mean, q05, q95, min, max;
};

SummaryStats summarize(numvec values) {
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double x : values) sum += x;
    return {sum / static_cast<double>(values.size()), quantile_sorted(values, 0.05),
            quantile_sorted(values, 0.95), values.front(), values.back()};
}

} // namespace

std::vector<ExperimentRow> run_experiment(const FacilityInstance& instance,
                                          const ExperimentPlan& plan) {
    const FacilityModel model(instance);
    const ProbVector& p_star = instance.p_star;

    // Ground cost matrix, only needed for the transport ball.
    std::vector<numvec> ground_cost;
    if (std::find(plan.methods.begin(), plan.methods.end(), Method::w) != plan.methods.end())
        ground_cost = transport_cost_matrix(instance);

    // The robust baseline ignores the data, so solve it once.
    RunResult robust_result;
    bool have_robust = false;

    std::vector<ExperimentRow> rows;
    rows.reserve(plan.methods.size() * plan.m_grid.size() * plan.reps);
    for (Method method : plan.methods) {
        const std::string& name = method_name(method);
        for (std::size_t m : plan.m_grid) {
            for (std::size_t rep = 0; rep < plan.reps; ++rep) {
                ExperimentRow row;
                row.method = method;
                row.m = m;
                row.rep = rep;
                row.stream_id = stream_id_for(name, m, rep);
                if (method == Method::robust) {
                    if (!have_robust) {
                        robust_result = robust_run(model, plan.pipeline);
                        robust_result.v_oos = expected_cost(robust_result.x_hat, p_star, model);
                        have_robust = true;
                    }
                    row.result = robust_result;
                } else {
                    RngStream rng(plan.master_seed, row.stream_id);
                    const Dataset data = draw_dataset(p_star, m, rng);
                    row.result = run_method(method, data, model, plan.pipeline,
                                            ground_cost.empty() ? nullptr : &ground_cost);
                    row.result.v_oos = expected_cost(row.result.x_hat, p_star, model);
                }
                rows.push_back(std::move(row));
            }
        }
    }

    std::sort(rows.begin(), rows.end(), [](const ExperimentRow& a, const ExperimentRow& b) {
        const std::string& an = method_name(a.method);
        const std::string& bn = method_name(b.method);
        if (an != bn) return an < bn;
        if (a.m != b.m) return a.m < b.m;
        return a.rep < b.rep;
    });
    return rows;
}

void write_rows_csv(const std::vector<ExperimentRow>& rows, std::ostream& os) {
    os << "method,m,rep,seed,v_hat,v_oos,v_star_saa,alpha_bound,tau,wall_time_ms\n";
    for (const ExperimentRow& row : rows) {
        const RunResult& r = row.result;
        os << method_name(row.method) << ',' << row.m << ',' << row.rep << ','
           << row.stream_id << ',' << fmt(r.v_hat) << ',' << fmt(r.v_oos) << ','
           << fmt(r.v_star_saa) << ',' << fmt(r.alpha_bound) << ',' << r.tau << ",0\n";
    }
}

void write_summary_csv(const std::vector<ExperimentRow>& rows, std::ostream& os) {
    os << "method,m,count,v_hat_mean,v_hat_q05,v_hat_q95,v_hat_min,v_hat_max,"
          "v_oos_mean,v_oos_q05,v_oos_q95,v_oos_min,v_oos_max\n";
    std::size_t i = 0;
    while (i < rows.size()) {
        std::size_t j = i;
        numvec v_hat, v_oos;
        while (j < rows.size() && rows[j].method == rows[i].method && rows[j].m == rows[i].m) {
            v_hat.push_back(rows[j].result.v_hat);
            v_oos.push_back(rows[j].result.v_oos);
            ++j;
        }
        const SummaryStats sh = summarize(std::move(v_hat));
        const SummaryStats so = summarize(std::move(v_oos));
        os << method_name(rows[i].method) << ',' << rows[i].m << ',' << (j - i) << ','
           << fmt(sh.mean) << ',' << fmt(sh.q05) << ',' << fmt(sh.q95) << ',' << fmt(sh.min)
           << ',' << fmt(sh.max) << ',' << fmt(so.mean) << ',' << fmt(so.q05) << ','
           << fmt(so.q95) << ',' << fmt(so.min) << ',' << fmt(so.max) << '\n';
        i = j;
    }
}

CoverageReport run_coverage(const FacilityInstance& instance, std::size_t m, std::size_t reps,
                            std::uint64_t master_seed, const PipelineConfig& cfg) {
    const FacilityModel model(instance);
    const ProbVector& p_star = instance.p_star;
    constexpr double kCertTol = 1e-6;

    CoverageReport report;
    report.reps = reps;
    for (std::size_t rep = 0; rep < reps; ++rep) {
        RngStream rng(master_seed, stream_id_for("coverage", m, rep));
        const Dataset data = draw_dataset(p_star, m, rng);
        const CadroRunDetail detail = cadro_run_detail(data, model, cfg);
        const double v_oos = expected_cost(detail.result.x_hat, p_star, model);

        const bool violated = v_oos > detail.result.v_hat;
        const CadroSet set{detail.v, detail.alpha};
        const bool member = contains(AmbiguitySet(set), p_star);
        if (violated) ++report.violations;
        if (member) {
            ++report.member_count;
            if (v_oos > detail.result.v_hat + kCertTol) ++report.conditional_violations;
        }
    }
    return report;
}

} // namespace cadro
