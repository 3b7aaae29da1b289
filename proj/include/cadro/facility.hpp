/**
 * Planar stall-placement problem used by the experiment harness: n demand
 * points with unknown frequencies, n_x stalls each confined to an axis-
 * aligned box, and per-point cost l_k(x) = max_i ||x^(i) - z^(k)||_2 (a
 * customer at z^(k) walks to the farthest stall).
 */
#pragma once

#include <array>

#include "cadro/core.hpp"

namespace cadro {

/// Axis-aligned rectangle [lo.x, hi.x] x [lo.y, hi.y].
struct Box {
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{0.0, 0.0};
};

/// A sampled problem instance together with its ground-truth distribution.
struct FacilityInstance {
    std::size_t n = 0;
    std::size_t n_x = 0;
    std::vector<std::array<double, 2>> points;  ///< demand points, in [0, 10]^2
    std::vector<Box> boxes;                     ///< one feasible box per stall
    ProbVector p_star = ProbVector::uniform(1); ///< true point frequencies
    std::uint64_t seed = 0;                     ///< generation seed, for provenance
};

/// Cost model for an instance; decisions are stall coordinates
/// x = (x^(1), y^(1), ..., x^(n_x), y^(n_x)) clamped to their boxes.
class FacilityModel : public CostModel {
public:
    explicit FacilityModel(FacilityInstance instance);

    std::size_t dim_x() const override { return 2 * instance_.n_x; }
    std::size_t n() const override { return instance_.n; }
    numvec eval(const numvec& x) const override;
    numvec subgrad(const numvec& x, std::size_t i) const override;
    numvec project(const numvec& x) const override;
    numvec initial_point() const override;

    const FacilityInstance& instance() const noexcept { return instance_; }

private:
    FacilityInstance instance_;
};

/// Cost of a single demand point: the distance to the farthest stall.
double facility_cost(const numvec& x, const std::array<double, 2>& point, std::size_t n_x);

/**
 * Sample an instance: points uniform in [0, 10]^2, box centers uniform in
 * [2, 8]^2 with per-axis half-widths uniform in [0.5, 1.5], and point
 * frequencies from a flat Dirichlet.  Identical seeds yield identical
 * instances on every platform.
 */
FacilityInstance generate_instance(std::uint64_t seed, std::size_t n, std::size_t n_x);

/// Pairwise point distances K_ij = ||z^(i) - z^(j)||_2 (transport ground cost).
std::vector<numvec> transport_cost_matrix(const FacilityInstance& instance);

/// Serialize to / parse from the instance JSON file format.
std::string instance_to_json(const FacilityInstance& instance);
FacilityInstance instance_from_json(const std::string& text);
void save_instance(const std::string& path, const FacilityInstance& instance);
FacilityInstance load_instance(const std::string& path);

} // namespace cadro
