#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cadro/ambiguity.hpp"
#include "lp.hpp"
#include "toy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace cadro;
using cadro::testing::random_simplex;
using cadro::testing::random_vector;

namespace {

double max_of(const numvec& z) { return *std::max_element(z.begin(), z.end()); }

// --- LP formulations of the worst-case subproblems (independent oracles) ---

// max <z, p>  s.t.  p in simplex, <v, p> <= alpha.
double lp_cadro(const numvec& z, const numvec& v, double alpha) {
    const lptest::mat a_ub = {v};
    const lptest::vec b_ub = {alpha};
    const lptest::mat a_eq = {lptest::vec(z.size(), 1.0)};
    const lptest::vec b_eq = {1.0};
    const auto res = lptest::solve_lp(a_ub, b_ub, a_eq, b_eq, z);
    REQUIRE(res.feasible);
    REQUIRE(res.bounded);
    return res.value;
}

// max <z, p>  s.t.  p in simplex, ||p - c||_1 <= r, linearized with
// auxiliary variables s_i >= |p_i - c_i|.
double lp_tv(const numvec& z, const ProbVector& c, double r) {
    const std::size_t n = z.size();
    lptest::mat a_ub;
    lptest::vec b_ub;
    for (std::size_t i = 0; i < n; ++i) {
        lptest::vec up(2 * n, 0.0), dn(2 * n, 0.0);
        up[i] = 1.0;
        up[n + i] = -1.0;  //  p_i - s_i <= c_i
        dn[i] = -1.0;
        dn[n + i] = -1.0;  // -p_i - s_i <= -c_i
        a_ub.push_back(up);
        b_ub.push_back(c[i]);
        a_ub.push_back(dn);
        b_ub.push_back(-c[i]);
    }
    lptest::vec budget(2 * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) budget[n + i] = 1.0;
    a_ub.push_back(budget);
    b_ub.push_back(r);

    lptest::vec ones(2 * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) ones[i] = 1.0;
    const lptest::mat a_eq = {ones};

    lptest::vec obj(2 * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) obj[i] = z[i];

    const auto res = lptest::solve_lp(a_ub, b_ub, a_eq, {1.0}, obj);
    REQUIRE(res.feasible);
    REQUIRE(res.bounded);
    return res.value;
}

// max sum_ij T_ij z_j  s.t.  T >= 0, row marginals = c, total cost <= r.
// The induced p_j = sum_i T_ij is then automatically a distribution.
double lp_w(const numvec& z, const ProbVector& c, const std::vector<numvec>& cost,
            double r) {
    const std::size_t n = z.size();
    lptest::mat a_eq;
    lptest::vec b_eq;
    for (std::size_t i = 0; i < n; ++i) {
        lptest::vec row(n * n, 0.0);
        for (std::size_t j = 0; j < n; ++j) row[i * n + j] = 1.0;
        a_eq.push_back(row);
        b_eq.push_back(c[i]);
    }
    lptest::vec budget(n * n, 0.0), obj(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            budget[i * n + j] = cost[i][j];
            obj[i * n + j] = z[j];
        }
    const auto res = lptest::solve_lp({budget}, {r}, a_eq, b_eq, obj);
    REQUIRE(res.feasible);
    REQUIRE(res.bounded);
    return res.value;
}

// min sum_ij K_ij T_ij with both marginals fixed (transport problem).
double lp_transport(const ProbVector& a, const ProbVector& b,
                    const std::vector<numvec>& cost) {
    const std::size_t n = a.dim();
    lptest::mat a_eq;
    lptest::vec b_eq;
    for (std::size_t i = 0; i < n; ++i) {  // row marginals
        lptest::vec row(n * n, 0.0);
        for (std::size_t j = 0; j < n; ++j) row[i * n + j] = 1.0;
        a_eq.push_back(row);
        b_eq.push_back(a[i]);
    }
    for (std::size_t j = 0; j < n; ++j) {  // column marginals
        lptest::vec row(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) row[i * n + j] = 1.0;
        a_eq.push_back(row);
        b_eq.push_back(b[j]);
    }
    lptest::vec obj(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) obj[i * n + j] = -cost[i][j];
    const auto res = lptest::solve_lp({}, {}, a_eq, b_eq, obj);
    REQUIRE(res.feasible);
    REQUIRE(res.bounded);
    return -res.value;
}

// Random symmetric nonnegative ground cost with zero diagonal.
std::vector<numvec> random_ground_cost(std::size_t n, RngStream& rng, double scale) {
    std::vector<numvec> cost(n, numvec(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            cost[i][j] = cost[j][i] = scale * rng.uniform01();
    return cost;
}

// --- KL oracles ---

// KL((1-t, t) || c) for the two-outcome case, with 0 log 0 = 0.
double kl_two_point(double t, const ProbVector& c) {
    auto term = [](double p, double q) { return p <= 0.0 ? 0.0 : p * std::log(p / q); };
    return term(1.0 - t, c[0]) + term(t, c[1]);
}

// Exact n=2 oracle: the feasible set {t : KL <= r} is an interval around
// c[1] (KL is convex in t with minimum 0 there) and the objective is linear
// in t, so the optimum is the feasible endpoint in the improving direction,
// found by bisection on KL(t) = r.
double kl_interval_oracle(const ProbVector& c, const numvec& z, double r) {
    auto endpoint = [&](double inner, double outer) {
        if (kl_two_point(outer, c) <= r) return outer;
        double lo = inner, hi = outer;  // KL(lo) <= r < KL(hi)
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (kl_two_point(mid, c) <= r ? lo : hi) = mid;
        }
        return lo;
    };
    if (z[1] > z[0]) {
        const double t = endpoint(c[1], 1.0);
        return (1.0 - t) * z[0] + t * z[1];
    }
    if (z[0] > z[1]) {
        const double t = endpoint(c[1], 0.0);
        return (1.0 - t) * z[0] + t * z[1];
    }
    return z[0];
}

// Lagrangian dual objective of the KL worst case, valid upper bound for any
// lambda > 0 (Gibbs variational formula):
//   phi(lambda) = lambda r + lambda log sum_i c_i exp(z_i / lambda),
// evaluated in shifted log-space for stability.
double kl_dual_phi(const ProbVector& c, const numvec& z, double r, double lam) {
    const double zmax = max_of(z);
    double s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i)
        if (c[i] > 0.0) s += c[i] * std::exp((z[i] - zmax) / lam);
    return lam * r + zmax + lam * std::log(s);
}

// Golden-section minimization of the (convex) dual over a wide bracket.
double kl_dual_min(const ProbVector& c, const numvec& z, double r) {
    const double range = max_of(z) - *std::min_element(z.begin(), z.end());
    double lo = 1e-9, hi = (range + 1.0) / std::max(r, 1e-9) + 10.0;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = kl_dual_phi(c, z, r, x1), f2 = kl_dual_phi(c, z, r, x2);
    for (int it = 0; it < 300; ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = kl_dual_phi(c, z, r, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = kl_dual_phi(c, z, r, x2);
        }
    }
    return std::min(f1, f2);
}

} // namespace

TEST_CASE("cadro_worst_case: worked examples") {
    // Binding budget: optimum mixes coordinates 2 and 3.
    const CadroSet set({2.0, 0.0, 1.0}, 0.8);
    const WorstCase wc = cadro_worst_case(set, {0.0, 1.0, 4.0});
    CHECK(wc.value == doctest::Approx(3.4).epsilon(1e-12));
    CHECK(wc.argmax[0] == doctest::Approx(0.0));
    CHECK(wc.argmax[1] == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(wc.argmax[2] == doctest::Approx(0.8).epsilon(1e-9));
    // The dual form agrees (lambda = 3 certifies 2.4 + 1 = 3.4).
    CHECK(cadro_worst_case_dual(set, {0.0, 1.0, 4.0}) ==
          doctest::Approx(3.4).epsilon(1e-12));

    // Inactive constraint: alpha >= max v reduces to the robust maximum.
    const CadroSet loose({1.0, 5.0, 2.0}, 6.0);
    CHECK(cadro_worst_case(loose, {3.0, -1.0, 7.0}).value ==
          doctest::Approx(7.0).epsilon(1e-12));

    // Objective aligned with the budget direction: value equals alpha.
    const CadroSet aligned({1.0, 2.0, 3.0}, 2.2);
    CHECK(cadro_worst_case(aligned, {1.0, 2.0, 3.0}).value ==
          doctest::Approx(2.2).epsilon(1e-12));

    CHECK_THROWS_AS(cadro_worst_case(set, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(CadroSet({1.0, 2.0}, 0.5), std::invalid_argument);  // empty set
    CHECK_THROWS_AS(CadroSet(numvec{}, 0.0), std::invalid_argument);
}

TEST_CASE("cadro oracle: primal equals dual on 1000 random problems") {
    RngStream rng(13, 1);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 48.0);
        const numvec z = random_vector(rng, n, -5.0, 5.0);
        const numvec v = random_vector(rng, n, -3.0, 4.0);
        const double vmin = *std::min_element(v.begin(), v.end());
        const double vmax = max_of(v);
        // Hit the boundary alpha = min v on some draws.
        const double alpha =
            (t % 10 == 0) ? vmin : vmin + rng.uniform01() * (vmax - vmin + 1.0);
        const CadroSet set(v, alpha);
        const WorstCase wc = cadro_worst_case(set, z);
        double lam = -1.0;
        const double dual = cadro_worst_case_dual(set, z, &lam);
        CHECK(std::abs(wc.value - dual) <= 1e-9 * std::max(1.0, std::abs(dual)));

        // The reported multiplier actually attains the dual value.
        CHECK(lam >= 0.0);
        double inner = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
            inner = std::max(inner, z[i] - lam * v[i]);
        CHECK(lam * std::max(alpha, vmin) + inner ==
              doctest::Approx(dual).epsilon(1e-12));
    }
}

TEST_CASE("cadro oracle matches the LP on random instances") {
    RngStream rng(13, 2);
    for (int t = 0; t < 400; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 6.0);
        const numvec z = random_vector(rng, n, -4.0, 4.0);
        const numvec v = random_vector(rng, n, -2.0, 3.0);
        const double vmin = *std::min_element(v.begin(), v.end());
        const double alpha = vmin + rng.uniform01() * (max_of(v) - vmin + 0.5);
        const CadroSet set(v, alpha);
        const WorstCase wc = cadro_worst_case(set, z);
        CHECK(wc.value == doctest::Approx(lp_cadro(z, v, alpha)).epsilon(1e-7));

        // The argmax is a member and attains the reported value.
        CHECK(contains(AmbiguitySet(set), wc.argmax));
        CHECK(dot(wc.argmax, z) == doctest::Approx(wc.value).epsilon(1e-9));
    }
}

TEST_CASE("tv_worst_case: worked examples") {
    const ProbVector uniform = ProbVector::uniform(3);
    const numvec z{1.0, 2.0, 3.0};

    const WorstCase wc = tv_worst_case(TvBall(uniform, 0.4), z);
    CHECK(wc.value == doctest::Approx(2.4).epsilon(1e-12));
    CHECK(wc.argmax[0] == doctest::Approx(0.4 / 3.0).epsilon(1e-9));
    CHECK(wc.argmax[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(wc.argmax[2] == doctest::Approx(1.6 / 3.0).epsilon(1e-9));

    // Radius zero pins the center; the TV diameter reaches the vertex.
    CHECK(tv_worst_case(TvBall(uniform, 0.0), z).value == doctest::Approx(2.0));
    CHECK(tv_worst_case(TvBall(uniform, 2.0), z).value == doctest::Approx(3.0));

    // Radii above the diameter clamp to 2 at construction.
    CHECK(TvBall(uniform, 5.0).radius == 2.0);
    CHECK(tv_worst_case(TvBall(uniform, 5.0), z).value == doctest::Approx(3.0));
}

TEST_CASE("tv oracle matches the LP on random instances") {
    RngStream rng(13, 3);
    for (int t = 0; t < 400; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 6.0);
        const numvec z = random_vector(rng, n, -4.0, 4.0);
        ProbVector c = random_simplex(rng, n);
        if (t % 7 == 0) c = ProbVector::basis(n, 0);  // zero entries in the center
        const double r = 2.2 * rng.uniform01();
        const TvBall ball(c, r);
        const WorstCase wc = tv_worst_case(ball, z);
        CHECK(wc.value == doctest::Approx(lp_tv(z, c, ball.radius)).epsilon(1e-7));
        CHECK(contains(AmbiguitySet(ball), wc.argmax));
        CHECK(dot(wc.argmax, z) == doctest::Approx(wc.value).epsilon(1e-9));
    }
}

TEST_CASE("kl_worst_case: worked examples and reachable-vertex short-circuit") {
    const ProbVector half({0.5, 0.5});
    const numvec z{0.0, 1.0};

    // Radius zero pins the center.
    CHECK(kl_worst_case(KlBall(half, 0.0), z).value == doctest::Approx(0.5));

    // r = ln 2 exactly reaches the point mass on the best coordinate.
    const WorstCase edge = kl_worst_case(KlBall(half, std::log(2.0)), z);
    CHECK(edge.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(edge.argmax[1] == doctest::Approx(1.0).epsilon(1e-9));

    // Strictly larger radii short-circuit to the vertex as well.
    const ProbVector c({0.3, 0.7});
    const WorstCase sc = kl_worst_case(KlBall(c, 1.3), numvec{2.0, 0.0});
    CHECK(sc.value == doctest::Approx(2.0));
    CHECK(sc.argmax[0] == doctest::Approx(1.0));

    // The dual multiplier is surfaced when requested.
    double lambda = -1.0;
    KlOracleOptions opts;
    opts.lambda_out = &lambda;
    const WorstCase interior = kl_worst_case(KlBall(half, 0.1), z, opts);
    CHECK(lambda > 0.0);
    CHECK(interior.value > 0.5);
    CHECK(interior.value < 1.0);
}

TEST_CASE("kl oracle matches the interval oracle on two outcomes") {
    RngStream rng(13, 4);
    for (int t = 0; t < 300; ++t) {
        const double u = 0.05 + 0.9 * rng.uniform01();
        const ProbVector c({u, 1.0 - u});
        const numvec z = random_vector(rng, 2, -3.0, 3.0);
        const double r = 1.5 * rng.uniform01();
        const WorstCase wc = kl_worst_case(KlBall(c, r), z);
        const double ref = kl_interval_oracle(c, z, r);
        CHECK(wc.value == doctest::Approx(ref).epsilon(1e-6));
        CHECK(contains(AmbiguitySet(KlBall(c, r)), wc.argmax));
        CHECK(dot(wc.argmax, z) == doctest::Approx(wc.value).epsilon(1e-9));
    }
}

TEST_CASE("kl oracle: duality certificate on up to five outcomes") {
    // For each case: any dual value upper-bounds the optimum (weak duality via
    // the Gibbs variational formula) and the returned feasible argmax
    // lower-bounds it; the two meeting within 1e-6 certifies the oracle.
    RngStream rng(13, 5);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 4.0);
        numvec raw(n);
        for (double& x : raw) x = 0.05 + rng.uniform01();
        double s = 0.0;
        for (double x : raw) s += x;
        for (double& x : raw) x /= s;  // strictly positive center
        const ProbVector c(raw);
        const numvec z = random_vector(rng, n, -3.0, 3.0);
        const double r = 0.01 + 1.2 * rng.uniform01();

        const WorstCase wc = kl_worst_case(KlBall(c, r), z);
        const double upper = kl_dual_min(c, z, r);
        const double lower = dot(wc.argmax, z);
        const double scale = std::max(1.0, std::abs(upper));

        CHECK(contains(AmbiguitySet(KlBall(c, r)), wc.argmax));
        CHECK(lower <= wc.value + 1e-9 * scale);
        CHECK(wc.value <= upper + 1e-7 * scale);
        CHECK(upper - lower <= 1e-6 * scale);
    }
}

TEST_CASE("w_worst_case: worked examples") {
    const std::vector<numvec> unit{{0.0, 1.0}, {1.0, 0.0}};
    const ProbVector corner({1.0, 0.0});
    const numvec z{0.0, 1.0};

    // Radius zero pins the center.
    CHECK(w_worst_case(WBall(corner, unit, 0.0), z).value == doctest::Approx(0.0));

    // Budget 0.3 moves 0.3 mass at unit cost onto coordinate 2.
    const WorstCase wc = w_worst_case(WBall(corner, unit, 0.3), z);
    CHECK(wc.value == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(wc.argmax[1] == doctest::Approx(0.3).epsilon(1e-9));

    // Budgets at or beyond the largest ground cost free the whole simplex.
    CHECK(w_worst_case(WBall(corner, unit, 1.0), z).value == doctest::Approx(1.0));
    CHECK(w_worst_case(WBall(corner, unit, 7.0), z).value == doctest::Approx(1.0));
    CHECK(WBall(corner, unit, 7.0).max_cost() == 1.0);
}

TEST_CASE("w oracle matches the transport LP on random instances") {
    RngStream rng(13, 6);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 4.0);
        const numvec z = random_vector(rng, n, -4.0, 4.0);
        const ProbVector c =
            (t % 9 == 0) ? ProbVector::basis(n, 0) : random_simplex(rng, n);
        const auto cost = random_ground_cost(n, rng, 3.0);
        double max_cost = 0.0;
        for (const auto& row : cost) max_cost = std::max(max_cost, max_of(row));
        const double r = 1.2 * max_cost * rng.uniform01();
        const WBall ball(c, cost, r);
        const WorstCase wc = w_worst_case(ball, z);
        CHECK(wc.value == doctest::Approx(lp_w(z, c, cost, r)).epsilon(1e-7));
        CHECK(contains(AmbiguitySet(ball), wc.argmax));
        CHECK(dot(wc.argmax, z) == doctest::Approx(wc.value).epsilon(1e-9));
    }
}

TEST_CASE("transport_cost: examples and LP agreement") {
    const std::vector<numvec> unit{{0.0, 1.0}, {1.0, 0.0}};
    const ProbVector a({1.0, 0.0}), b({0.4, 0.6});
    CHECK(transport_cost(a, a, unit) == doctest::Approx(0.0));
    CHECK(transport_cost(a, b, unit) == doctest::Approx(0.6).epsilon(1e-12));

    const std::vector<numvec> k3{{0.0, 3.0}, {3.0, 0.0}};
    CHECK(transport_cost(ProbVector({1.0, 0.0}), ProbVector({0.0, 1.0}), k3) ==
          doctest::Approx(3.0).epsilon(1e-12));

    RngStream rng(13, 7);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 4.0);
        const auto cost = random_ground_cost(n, rng, 2.0);
        const ProbVector pa = random_simplex(rng, n);
        const ProbVector pb =
            (t % 6 == 0) ? ProbVector::basis(n, n - 1) : random_simplex(rng, n);
        const double direct = transport_cost(pa, pb, cost);
        CHECK(direct == doctest::Approx(lp_transport(pa, pb, cost)).epsilon(1e-8));
        // Symmetric ground cost makes the transport distance symmetric.
        CHECK(direct == doctest::Approx(transport_cost(pb, pa, cost)).epsilon(1e-9));
    }
}

TEST_CASE("simplex_worst_case and variant dispatch") {
    const numvec z{1.5, -2.0, 4.0, 0.0};
    const WorstCase wc = simplex_worst_case(FullSimplex(4), z);
    CHECK(wc.value == 4.0);
    CHECK(wc.argmax[2] == 1.0);

    // Dispatch through the variant agrees with the direct calls.
    const ProbVector c = ProbVector::uniform(4);
    const std::vector<numvec> cost{{0.0, 1.0, 2.0, 1.0},
                                   {1.0, 0.0, 1.0, 2.0},
                                   {2.0, 1.0, 0.0, 1.0},
                                   {1.0, 2.0, 1.0, 0.0}};
    const AmbiguitySet sets[] = {
        AmbiguitySet(CadroSet({0.0, 1.0, 2.0, 3.0}, 1.1)),
        AmbiguitySet(TvBall(c, 0.5)), AmbiguitySet(KlBall(c, 0.2)),
        AmbiguitySet(WBall(c, cost, 0.4)), AmbiguitySet(FullSimplex(4))};
    const double expected[] = {
        cadro_worst_case(CadroSet({0.0, 1.0, 2.0, 3.0}, 1.1), z).value,
        tv_worst_case(TvBall(c, 0.5), z).value,
        kl_worst_case(KlBall(c, 0.2), z).value,
        w_worst_case(WBall(c, cost, 0.4), z).value,
        simplex_worst_case(FullSimplex(4), z).value};
    for (int i = 0; i < 5; ++i) {
        CHECK(worst_case(sets[i], z).value == doctest::Approx(expected[i]).epsilon(1e-12));
        CHECK(set_dim(sets[i]) == 4);
    }
}

TEST_CASE("contains: examples and tolerance") {
    CHECK(contains(AmbiguitySet(CadroSet({0.0, 1.0}, 0.3)), ProbVector({0.8, 0.2})));
    CHECK_FALSE(
        contains(AmbiguitySet(CadroSet({0.0, 1.0}, 0.3)), ProbVector({0.6, 0.4})));
    // Boundary within the 1e-9 membership tolerance.
    CHECK(contains(AmbiguitySet(CadroSet({0.0, 1.0}, 0.3)),
                   ProbVector({0.7 - 5e-10, 0.3 + 5e-10})));

    const ProbVector u = ProbVector::uniform(3);
    CHECK(contains(AmbiguitySet(TvBall(u, 0.1)), u));
    CHECK_FALSE(contains(AmbiguitySet(TvBall(u, 0.1)), ProbVector({1.0, 0.0, 0.0})));

    // KL((0.9,0.1) || (0.5,0.5)) ~ 0.368 exceeds the 0.05 budget.
    const ProbVector half({0.5, 0.5});
    CHECK(kl_divergence(ProbVector({0.9, 0.1}), half) ==
          doctest::Approx(0.9 * std::log(1.8) + 0.1 * std::log(0.2)).epsilon(1e-12));
    CHECK_FALSE(contains(AmbiguitySet(KlBall(half, 0.05)), ProbVector({0.9, 0.1})));
    CHECK(contains(AmbiguitySet(KlBall(half, 0.4)), ProbVector({0.9, 0.1})));
    // Divergence is +inf when p charges an outcome the center excludes.
    CHECK(std::isinf(kl_divergence(half, ProbVector({1.0, 0.0}))));

    const std::vector<numvec> unit{{0.0, 1.0}, {1.0, 0.0}};
    CHECK(contains(AmbiguitySet(WBall(ProbVector({1.0, 0.0}), unit, 0.3)),
                   ProbVector({0.75, 0.25})));
    CHECK_FALSE(contains(AmbiguitySet(WBall(ProbVector({1.0, 0.0}), unit, 0.3)),
                         ProbVector({0.5, 0.5})));

    CHECK(contains(AmbiguitySet(FullSimplex(2)), half));
}

TEST_CASE("worst-case value is monotone in the budget and sandwiched") {
    RngStream rng(13, 8);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 6.0);
        const numvec z = random_vector(rng, n, -4.0, 4.0);
        const ProbVector center = random_simplex(rng, n);
        const numvec v = random_vector(rng, n, -2.0, 3.0);
        const auto cost = random_ground_cost(n, rng, 2.0);
        const double zmax = max_of(z);
        const double center_val = dot(center, z);

        double prev_cadro = -1e100, prev_tv = -1e100, prev_kl = -1e100,
               prev_w = -1e100;
        for (int step = 0; step <= 7; ++step) {
            const double frac = static_cast<double>(step) / 7.0;

            // CADRO budget sweeps from <center, v> (center feasible) upward.
            const double alpha = dot(center, v) + 3.0 * frac;
            const double vc = cadro_worst_case(CadroSet(v, alpha), z).value;
            CHECK(vc >= prev_cadro - 1e-10);
            CHECK(vc >= center_val - 1e-9);
            CHECK(vc <= zmax + 1e-9);
            prev_cadro = vc;

            const double vt = tv_worst_case(TvBall(center, 2.0 * frac), z).value;
            CHECK(vt >= prev_tv - 1e-10);
            CHECK(vt >= center_val - 1e-9);
            CHECK(vt <= zmax + 1e-9);
            prev_tv = vt;

            const double vk = kl_worst_case(KlBall(center, 1.5 * frac), z).value;
            CHECK(vk >= prev_kl - 1e-7);
            CHECK(vk >= center_val - 1e-7);
            CHECK(vk <= zmax + 1e-7);
            prev_kl = vk;

            const double vw =
                w_worst_case(WBall(center, cost, 2.5 * frac), z).value;
            CHECK(vw >= prev_w - 1e-10);
            CHECK(vw >= center_val - 1e-9);
            CHECK(vw <= zmax + 1e-9);
            prev_w = vw;
        }
    }
}

TEST_CASE("radius calibrations: frozen values, caps, and limits") {
    // TV: Weissman-style L1 concentration.
    CHECK(tv_radius(50, 200, 0.01) ==
          doctest::Approx(0.626598190341987).epsilon(1e-12));
    CHECK(tv_radius(50, 1, 0.01) == 2.0);  // tiny samples cap at the diameter
    CHECK(tv_radius(2, 100000, 0.999) ==
          doctest::Approx(std::sqrt(2.0 / 100000.0 * std::log(2.0 / 0.999)))
              .epsilon(1e-9));

    // Huge n must not overflow 2^n: radius stays capped but finite.
    CHECK(tv_radius(4000, 10, 0.01) == 2.0);
    CHECK(tv_radius(4000, 10000000, 0.01) ==
          doctest::Approx(std::sqrt(2.0 / 1e7 * (4000.0 * std::log(2.0) + std::log(100.0))))
              .epsilon(1e-6));

    // KL: method-of-types calibration.
    CHECK(kl_radius(50, 200, 0.01) ==
          doctest::Approx(1.34885207794471).epsilon(1e-12));
    CHECK(kl_radius(50, 1000000000, 0.01) < 2e-6);  // vanishes as m grows
    CHECK(kl_radius(1, 99, 0.2) ==
          doctest::Approx((std::log(100.0) + std::log(5.0)) / 99.0).epsilon(1e-12));

    // Transport: max ground cost times the TV radius.
    std::vector<numvec> cost{{0.0, 5.0}, {5.0, 0.0}};
    CHECK(w_radius(cost, 50, 200, 0.01) ==
          doctest::Approx(5.0 * 0.626598190341987).epsilon(1e-12));
    CHECK(w_radius(cost, 50, 1, 0.01) == doctest::Approx(10.0));  // capped TV
    std::vector<numvec> zero{{0.0, 0.0}, {0.0, 0.0}};
    CHECK(w_radius(zero, 50, 200, 0.01) == 0.0);

    CHECK_THROWS_AS(tv_radius(50, 200, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(kl_radius(50, 200, 1.0), std::invalid_argument);
}

TEST_CASE("ambiguity sets: construction validation") {
    CHECK_THROWS_AS(TvBall(ProbVector::uniform(2), -0.1), std::invalid_argument);
    CHECK_THROWS_AS(KlBall(ProbVector::uniform(2), -1e-9), std::invalid_argument);

    // Positive KL radius demands a strictly positive center; radius zero is fine.
    CHECK_THROWS_AS(KlBall(ProbVector({1.0, 0.0}), 0.1), std::invalid_argument);
    CHECK_NOTHROW(KlBall(ProbVector({1.0, 0.0}), 0.0));

    const ProbVector u = ProbVector::uniform(2);
    CHECK_THROWS_AS(WBall(u, {{0.0, 1.0}}, 0.1), std::invalid_argument);  // not n x n
    CHECK_THROWS_AS(WBall(u, {{0.5, 1.0}, {1.0, 0.0}}, 0.1),
                    std::invalid_argument);  // nonzero diagonal
    CHECK_THROWS_AS(WBall(u, {{0.0, 1.0}, {2.0, 0.0}}, 0.1),
                    std::invalid_argument);  // asymmetric
    CHECK_THROWS_AS(WBall(u, {{0.0, -1.0}, {-1.0, 0.0}}, 0.1),
                    std::invalid_argument);  // negative cost
    CHECK_THROWS_AS(WBall(u, {{0.0, 1.0}, {1.0, 0.0}}, -0.5), std::invalid_argument);

    CHECK_THROWS_AS(FullSimplex(0), std::invalid_argument);
}
