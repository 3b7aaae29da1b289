/**
 * Core vocabulary types for finite-outcome stochastic programs:
 * probability vectors on the n-point simplex, observation datasets,
 * the abstract cost model L : X -> R^n, deterministic random streams,
 * and the result record produced by the solution pipelines.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cadro {

using numvec = std::vector<double>;

/// Absolute tolerance used by set-membership checks throughout the library.
inline constexpr double kMembershipTol = 1e-9;

/**
 * A probability vector on the simplex Delta_n.
 *
 * Construction accepts weights that are within 1e-6 of the simplex
 * (entrywise >= -1e-6, total mass within 1e-6 of one), clamps stray
 * negatives to zero and renormalizes, so that after construction all
 * entries are >= 0 and sum to one within 1e-9.  Inputs farther away
 * are rejected with std::invalid_argument.
 */
class ProbVector {
public:
    explicit ProbVector(numvec weights);

    /// Uniform distribution on n outcomes.
    static ProbVector uniform(std::size_t n);
    /// Point mass on outcome i (0-based) among n outcomes.
    static ProbVector basis(std::size_t n, std::size_t i);

    std::size_t dim() const noexcept { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    const numvec& weights() const noexcept { return weights_; }

private:
    struct unchecked_t {};
    ProbVector(numvec weights, unchecked_t) : weights_(std::move(weights)) {}

    numvec weights_;
};

/**
 * An i.i.d. sample of outcome indices from a finite distribution on
 * {0, ..., n-1}.  Order is meaningful: splits are positional.
 */
struct Dataset {
    std::vector<std::size_t> outcomes;
    std::size_t n = 0;

    Dataset() = default;
    /// Validates that every outcome index is < n.
    Dataset(std::vector<std::size_t> outcomes_in, std::size_t n_in);

    std::size_t size() const noexcept { return outcomes.size(); }
};

/**
 * Abstract cost model for a decision problem with finitely many outcomes:
 * a feasible set X subset R^dim_x (closed convex, projection available)
 * and convex per-outcome costs l_i : R^dim_x -> R, i in {0, ..., n-1}.
 */
class CostModel {
public:
    virtual ~CostModel() = default;

    virtual std::size_t dim_x() const = 0;
    virtual std::size_t n() const = 0;

    /// Full cost vector L(x) = (l_0(x), ..., l_{n-1}(x)).
    virtual numvec eval(const numvec& x) const = 0;
    /// A subgradient of l_i at x.
    virtual numvec subgrad(const numvec& x, std::size_t i) const = 0;
    /// Euclidean projection onto X; idempotent.
    virtual numvec project(const numvec& x) const = 0;
    /// Deterministic starting point (the center of the feasible boxes).
    virtual numvec initial_point() const = 0;
};

/**
 * Deterministic random stream: identical (seed, stream_id) pairs yield
 * identical draw sequences on every platform and under any thread count.
 *
 * Internally a splitmix64-seeded xoshiro256++ generator; all variate
 * transforms are implemented here rather than with <random> distributions,
 * whose outputs are implementation-defined.
 */
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    /// Next raw 64-bit word.
    std::uint64_t next_u64();
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01();
    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);
    /// Standard exponential variate, -log(1 - U).
    double exponential();
    /// Uniform index in {0, ..., n-1}; unbiased via rejection.
    std::size_t index(std::size_t n);
    /// Categorical draw from a probability vector (inverse CDF).
    std::size_t categorical(const ProbVector& p);

    /// Child stream derived deterministically from this stream's identity.
    RngStream derive(std::uint64_t child_id) const;

private:
    std::uint64_t seed_ = 0;
    std::uint64_t stream_id_ = 0;
    std::uint64_t state_[4] = {0, 0, 0, 0};
};

/// Stable 64-bit hash of a method label and run coordinates; used to
/// assign every replication its own stream id.
std::uint64_t stream_id_for(const std::string& method, std::size_t m, std::size_t rep);

/**
 * Outcome of one pipeline run.  v_oos and v_star_saa are NaN when the
 * pipeline cannot compute them (no true distribution / no split).
 */
struct RunResult {
    double v_hat = 0.0;            ///< certified / robust objective value
    numvec x_hat;                  ///< decision returned by the pipeline
    std::size_t tau = 0;           ///< training split size (0 = no split)
    double alpha_bound = 0.0;      ///< mean upper bound (NaN if not used)
    double v_oos = 0.0;            ///< out-of-sample cost at the true p (NaN until filled)
    double v_star_saa = 0.0;       ///< SAA value on the calibration sample (NaN if n/a)
    std::string method;            ///< pipeline label ("cadro", "saa", ...)
    double wall_time_ms = 0.0;     ///< measured wall time of the run
    std::map<std::string, double> diagnostics;
};

/// <p, v>; both arguments must have equal length.
double dot(const numvec& a, const numvec& b);
double dot(const ProbVector& p, const numvec& v);

/**
 * Empirical distribution of a dataset: p_i = #{k : outcome_k = i} / m.
 * An empty dataset yields the uniform distribution on n outcomes.
 */
ProbVector empirical_distribution(const Dataset& data);

/// Expected cost <p, L(x)>; validates dimensions against the model.
double expected_cost(const numvec& x, const ProbVector& p, const CostModel& model);

/**
 * Positional split: the first tau observations form the training set,
 * the remaining m - tau the calibration set.  Requires 0 <= tau <= m;
 * either side may come out empty.
 */
std::pair<Dataset, Dataset> split_dataset(const Dataset& data, std::size_t tau);

/// Draw m i.i.d. outcomes from p using the given stream.
Dataset draw_dataset(const ProbVector& p, std::size_t m, RngStream& rng);

} // namespace cadro
