#include "cadro/core.hpp"

#include <algorithm>
#include <cmath>

namespace cadro {

namespace {

constexpr double kSimplexRejectTol = 1e-6;

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace

ProbVector::ProbVector(numvec weights) : weights_(std::move(weights)) {
    if (weights_.empty())
        throw std::invalid_argument("ProbVector: empty weight vector");
    double total = 0.0;
    for (double w : weights_) {
        if (!(w >= -kSimplexRejectTol))  // also rejects NaN
            throw std::invalid_argument("ProbVector: negative weight beyond tolerance");
        total += w;
    }
    if (std::abs(total - 1.0) > kSimplexRejectTol)
        throw std::invalid_argument("ProbVector: weights do not sum to one");
    double clipped = 0.0;
    for (double& w : weights_) {
        if (w < 0.0) w = 0.0;
        clipped += w;
    }
    for (double& w : weights_) w /= clipped;
}

ProbVector ProbVector::uniform(std::size_t n) {
    if (n == 0) throw std::invalid_argument("ProbVector::uniform: n must be positive");
    return ProbVector(numvec(n, 1.0 / static_cast<double>(n)), unchecked_t{});
}

ProbVector ProbVector::basis(std::size_t n, std::size_t i) {
    if (i >= n) throw std::invalid_argument("ProbVector::basis: index out of range");
    numvec w(n, 0.0);
    w[i] = 1.0;
    return ProbVector(std::move(w), unchecked_t{});
}

Dataset::Dataset(std::vector<std::size_t> outcomes_in, std::size_t n_in)
    : outcomes(std::move(outcomes_in)), n(n_in) {
    if (n == 0) throw std::invalid_argument("Dataset: n must be positive");
    for (std::size_t k : outcomes)
        if (k >= n) throw std::invalid_argument("Dataset: outcome index out of range");
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    // Two interleaved splitmix chains keyed by seed and stream id give
    // well-separated states for (seed, id) pairs that differ in either part.
    std::uint64_t a = seed ^ 0x6a09e667f3bcc909ULL;
    std::uint64_t b = stream_id ^ 0xbb67ae8584caa73bULL;
    for (auto& word : state_) word = splitmix64(a) ^ rotl(splitmix64(b), 17);
    // xoshiro must not start from the all-zero state.
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

std::uint64_t RngStream::next_u64() {
    // xoshiro256++ step (Blackman & Vigna).
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    if (!(lo <= hi)) throw std::invalid_argument("RngStream::uniform: lo > hi");
    return lo + (hi - lo) * uniform01();
}

double RngStream::exponential() {
    // 1 - U is in (0, 1], so the logarithm is finite.
    return -std::log1p(-uniform01());
}

std::size_t RngStream::index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("RngStream::index: n must be positive");
    const std::uint64_t bound = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t draw;
    do { draw = next_u64(); } while (draw >= limit);
    return static_cast<std::size_t>(draw % bound);
}

std::size_t RngStream::categorical(const ProbVector& p) {
    const double u = uniform01();
    double acc = 0.0;
    const std::size_t n = p.dim();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        acc += p[i];
        if (u < acc) return i;
    }
    return n - 1;
}

RngStream RngStream::derive(std::uint64_t child_id) const {
    std::uint64_t mix = stream_id_ ^ 0x9e3779b97f4a7c15ULL;
    mix = splitmix64(mix) ^ child_id;
    return RngStream(seed_, splitmix64(mix));
}

std::uint64_t stream_id_for(const std::string& method, std::size_t m, std::size_t rep) {
    // FNV-1a over a canonical "method|m|rep" encoding; stable across platforms.
    const std::string key = method + "|" + std::to_string(m) + "|" + std::to_string(rep);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : key) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double dot(const numvec& a, const numvec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double dot(const ProbVector& p, const numvec& v) { return dot(p.weights(), v); }

ProbVector empirical_distribution(const Dataset& data) {
    if (data.n == 0) throw std::invalid_argument("empirical_distribution: dataset has n = 0");
    if (data.outcomes.empty()) return ProbVector::uniform(data.n);
    numvec counts(data.n, 0.0);
    for (std::size_t k : data.outcomes) counts[k] += 1.0;
    const double m = static_cast<double>(data.outcomes.size());
    for (double& c : counts) c /= m;
    return ProbVector(std::move(counts));
}

double expected_cost(const numvec& x, const ProbVector& p, const CostModel& model) {
    if (x.size() != model.dim_x())
        throw std::invalid_argument("expected_cost: decision dimension mismatch");
    if (p.dim() != model.n())
        throw std::invalid_argument("expected_cost: distribution dimension mismatch");
    return dot(p, model.eval(x));
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& data, std::size_t tau) {
    const std::size_t m = data.size();
    if (tau > m) throw std::out_of_range("split_dataset: tau must satisfy 0 <= tau <= m");
    std::vector<std::size_t> head(data.outcomes.begin(), data.outcomes.begin() + tau);
    std::vector<std::size_t> tail(data.outcomes.begin() + tau, data.outcomes.end());
    return {Dataset(std::move(head), data.n), Dataset(std::move(tail), data.n)};
}

Dataset draw_dataset(const ProbVector& p, std::size_t m, RngStream& rng) {
    std::vector<std::size_t> outcomes;
    outcomes.reserve(m);
    for (std::size_t k = 0; k < m; ++k) outcomes.push_back(rng.categorical(p));
    return Dataset(std::move(outcomes), p.dim());
}

} // namespace cadro
