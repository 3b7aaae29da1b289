/**
 * Command-line entry point.
 *
 * Subcommands:
 *   generate    write a facility-location instance as JSON
 *   run         one replication of a method on a freshly drawn dataset
 *   experiment  full (method x sample size x replication) sweep to CSV
 *   coverage    Monte-Carlo audit of the certified pipeline
 *
 * Exit codes: 0 success, 2 validation / usage error, 3 coverage audit
 * failure (empirical violation rate above the binomial slack band).
 */
#include "cadro/experiment.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace {

using nlohmann::json;
using namespace cadro;

/// Instance source shared by run / experiment / coverage: either a JSON
/// file written by `generate`, or a fresh instance from (seed, n, n_x).
struct InstanceArgs {
    std::string path;
    std::uint64_t seed = 1;
    std::size_t n = 50;
    std::size_t n_x = 3;

    void attach(CLI::App& cmd) {
        cmd.add_option("--instance", path, "instance JSON file (overrides --seed/--n/--n-x)");
        cmd.add_option("--seed", seed, "instance generation seed")->capture_default_str();
        cmd.add_option("--n", n, "number of demand points")->capture_default_str();
        cmd.add_option("--n-x", n_x, "number of facilities")->capture_default_str();
    }

    FacilityInstance load() const {
        if (!path.empty()) return load_instance(path);
        if (n < 1 || n_x < 1)
            throw std::invalid_argument("instance size: need --n >= 1 and --n-x >= 1");
        return generate_instance(seed, n, n_x);
    }
};

/// Pipeline knobs shared by run / experiment / coverage.
struct PipelineArgs {
    double beta = 0.01;
    double mu = 0.01;
    double nu = 0.8;
    std::string bound = "ordered";
    std::string gamma = "asymptotic";
    std::size_t max_iters = 20000;

    void attach(CLI::App& cmd) {
        cmd.add_option("--beta", beta, "certificate failure probability")
            ->capture_default_str();
        cmd.add_option("--mu", mu, "split schedule parameter mu")->capture_default_str();
        cmd.add_option("--nu", nu, "split schedule parameter nu")->capture_default_str();
        cmd.add_option("--bound", bound, "mean bound for the certificate")
            ->check(CLI::IsMember({"ordered", "hoeffding"}))
            ->capture_default_str();
        cmd.add_option("--gamma", gamma, "CDF band calibration for the ordered bound")
            ->check(CLI::IsMember({"asymptotic", "exact-ks"}))
            ->capture_default_str();
        cmd.add_option("--max-iters", max_iters, "subgradient iteration budget")
            ->capture_default_str();
    }

    PipelineConfig config() const {
        PipelineConfig cfg;
        cfg.beta = beta;
        cfg.mu = mu;
        cfg.nu = nu;
        cfg.bound = bound == "hoeffding" ? BoundKind::hoeffding : BoundKind::ordered;
        cfg.gamma_mode = gamma == "exact-ks" ? GammaMode::exact_ks : GammaMode::asymptotic;
        cfg.solver.max_iters = max_iters;
        return cfg;
    }
};

json run_result_to_json(const RunResult& r) {
    json j;
    j["method"] = r.method;
    j["v_hat"] = r.v_hat;
    j["x_hat"] = r.x_hat;
    j["tau"] = r.tau;
    j["alpha_bound"] = r.alpha_bound;
    j["v_oos"] = r.v_oos;
    j["v_star_saa"] = r.v_star_saa;
    j["wall_time_ms"] = r.wall_time_ms;
    j["diagnostics"] = r.diagnostics;
    return j;
}

int cmd_generate(const std::string& out, std::uint64_t seed, std::size_t n, std::size_t n_x) {
    if (n < 1 || n_x < 1)
        throw std::invalid_argument("generate: need --n >= 1 and --n-x >= 1");
    const FacilityInstance instance = generate_instance(seed, n, n_x);
    save_instance(out, instance);
    json j;
    j["path"] = out;
    j["seed"] = seed;
    j["n"] = n;
    j["n_x"] = n_x;
    std::cout << j.dump() << "\n";
    return 0;
}

int cmd_run(const InstanceArgs& inst_args, const PipelineArgs& pipe_args,
            const std::string& method_str, std::size_t m, std::size_t rep,
            std::uint64_t master_seed) {
    const Method method = method_from_name(method_str);
    const FacilityInstance instance = inst_args.load();
    const FacilityModel model(instance);
    const PipelineConfig cfg = pipe_args.config();

    RngStream rng(master_seed, stream_id_for(method_str, m, rep));
    const Dataset data = draw_dataset(instance.p_star, m, rng);

    std::vector<numvec> ground_cost;
    const std::vector<numvec>* cost_ptr = nullptr;
    if (method == Method::w) {
        ground_cost = transport_cost_matrix(instance);
        cost_ptr = &ground_cost;
    }

    RunResult result = run_method(method, data, model, cfg, cost_ptr);
    result.v_oos = expected_cost(result.x_hat, instance.p_star, model);

    json j = run_result_to_json(result);
    j["m"] = m;
    j["rep"] = rep;
    j["seed"] = rng.stream_id();
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_experiment(const InstanceArgs& inst_args, const PipelineArgs& pipe_args,
                   const std::string& methods_csv, std::vector<std::size_t> m_grid,
                   std::size_t reps, std::uint64_t master_seed, const std::string& out,
                   std::string summary_out) {
    if (reps < 1) throw std::invalid_argument("experiment: need --reps >= 1");
    if (m_grid.empty()) throw std::invalid_argument("experiment: empty --m-grid");
    for (std::size_t i = 0; i < m_grid.size(); ++i) {
        if (m_grid[i] < 2)
            throw std::invalid_argument("experiment: every m must be >= 2");
        if (i > 0 && m_grid[i] <= m_grid[i - 1])
            throw std::invalid_argument("experiment: --m-grid must be strictly increasing");
    }

    ExperimentPlan plan;
    plan.methods.clear();
    std::stringstream names(methods_csv);
    for (std::string name; std::getline(names, name, ',');)
        plan.methods.push_back(method_from_name(name));
    if (plan.methods.empty()) throw std::invalid_argument("experiment: empty --methods");
    plan.m_grid = std::move(m_grid);
    plan.reps = reps;
    plan.master_seed = master_seed;
    plan.pipeline = pipe_args.config();

    const FacilityInstance instance = inst_args.load();
    const std::vector<ExperimentRow> rows = run_experiment(instance, plan);

    std::ofstream rows_file(out, std::ios::binary);
    if (!rows_file) throw std::runtime_error("cannot open for writing: " + out);
    write_rows_csv(rows, rows_file);
    if (!rows_file.flush()) throw std::runtime_error("write failed: " + out);

    if (summary_out.empty()) {
        summary_out = out;
        const auto dot = summary_out.rfind(".csv");
        if (dot != std::string::npos && dot == summary_out.size() - 4)
            summary_out.insert(dot, "_summary");
        else
            summary_out += "_summary.csv";
    }
    std::ofstream summary_file(summary_out, std::ios::binary);
    if (!summary_file) throw std::runtime_error("cannot open for writing: " + summary_out);
    write_summary_csv(rows, summary_file);
    if (!summary_file.flush()) throw std::runtime_error("write failed: " + summary_out);

    json j;
    j["rows"] = out;
    j["summary"] = summary_out;
    j["row_count"] = rows.size();
    std::cout << j.dump() << "\n";
    return 0;
}

int cmd_coverage(const InstanceArgs& inst_args, const PipelineArgs& pipe_args, std::size_t m,
                 std::size_t reps, std::uint64_t master_seed) {
    if (reps < 1) throw std::invalid_argument("coverage: need --reps >= 1");
    if (m < 2) throw std::invalid_argument("coverage: need --m >= 2");
    const FacilityInstance instance = inst_args.load();
    const PipelineConfig cfg = pipe_args.config();

    const CoverageReport report = run_coverage(instance, m, reps, master_seed, cfg);
    const double beta = cfg.beta;
    const double slack = 3.0 * std::sqrt(beta * (1.0 - beta) / static_cast<double>(reps));
    const double threshold = beta + slack;
    const bool pass = report.violation_rate() <= threshold;

    json j;
    j["m"] = m;
    j["reps"] = reps;
    j["beta"] = beta;
    j["violations"] = report.violations;
    j["violation_rate"] = report.violation_rate();
    j["member_count"] = report.member_count;
    j["member_rate"] = report.member_rate();
    j["conditional_violations"] = report.conditional_violations;
    j["threshold"] = threshold;
    j["pass"] = pass;
    std::cout << j.dump(2) << "\n";
    return pass ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified data-driven distributionally robust optimization"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "write a facility instance as JSON");
    std::string gen_out;
    std::uint64_t gen_seed = 1;
    std::size_t gen_n = 50, gen_n_x = 3;
    generate->add_option("--out", gen_out, "output path")->required();
    generate->add_option("--seed", gen_seed, "generation seed")->capture_default_str();
    generate->add_option("--n", gen_n, "number of demand points")->capture_default_str();
    generate->add_option("--n-x", gen_n_x, "number of facilities")->capture_default_str();

    // run
    auto* run = app.add_subcommand("run", "single replication, JSON result on stdout");
    InstanceArgs run_inst;
    PipelineArgs run_pipe;
    std::string run_method_str = "cadro";
    std::size_t run_m = 200, run_rep = 0;
    std::uint64_t run_master_seed = 1;
    run_inst.attach(*run);
    run_pipe.attach(*run);
    run->add_option("--method", run_method_str, "cadro|saa|tv|kl|w|robust")
        ->capture_default_str();
    run->add_option("--m", run_m, "sample size")->capture_default_str();
    run->add_option("--rep", run_rep, "replication index (stream selector)")
        ->capture_default_str();
    run->add_option("--master-seed", run_master_seed, "master seed for data draws")
        ->capture_default_str();

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Monte-Carlo sweep to CSV");
    InstanceArgs exp_inst;
    PipelineArgs exp_pipe;
    std::string exp_methods = "cadro,saa,tv,kl,w,robust";
    std::vector<std::size_t> exp_m_grid = {25, 50, 100, 200, 400, 800};
    std::size_t exp_reps = 100;
    std::uint64_t exp_master_seed = 1;
    std::string exp_out = "experiment.csv", exp_summary_out;
    exp_inst.attach(*experiment);
    exp_pipe.attach(*experiment);
    experiment->add_option("--methods", exp_methods, "comma-separated method list")
        ->capture_default_str();
    experiment->add_option("--m-grid", exp_m_grid, "sample sizes (strictly increasing)")
        ->delimiter(',')
        ->capture_default_str();
    experiment->add_option("--reps", exp_reps, "replications per cell")->capture_default_str();
    experiment->add_option("--master-seed", exp_master_seed, "master seed for data draws")
        ->capture_default_str();
    experiment->add_option("--out", exp_out, "per-run CSV path")->capture_default_str();
    experiment->add_option("--summary-out", exp_summary_out,
                           "summary CSV path (default: <out>_summary.csv)");

    // coverage
    auto* coverage = app.add_subcommand("coverage", "certificate coverage audit");
    InstanceArgs cov_inst;
    PipelineArgs cov_pipe;
    std::size_t cov_m = 50, cov_reps = 500;
    std::uint64_t cov_master_seed = 1;
    cov_inst.attach(*coverage);
    cov_pipe.attach(*coverage);
    coverage->add_option("--m", cov_m, "sample size per replication")->capture_default_str();
    coverage->add_option("--reps", cov_reps, "number of replications")->capture_default_str();
    coverage->add_option("--master-seed", cov_master_seed, "master seed for data draws")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (generate->parsed()) return cmd_generate(gen_out, gen_seed, gen_n, gen_n_x);
        if (run->parsed())
            return cmd_run(run_inst, run_pipe, run_method_str, run_m, run_rep,
                           run_master_seed);
        if (experiment->parsed())
            return cmd_experiment(exp_inst, exp_pipe, exp_methods, exp_m_grid, exp_reps,
                                  exp_master_seed, exp_out, exp_summary_out);
        if (coverage->parsed())
            return cmd_coverage(cov_inst, cov_pipe, cov_m, cov_reps, cov_master_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
