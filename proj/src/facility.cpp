#include "cadro/facility.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cadro {

namespace {

double point_distance(const numvec& x, std::size_t stall, const std::array<double, 2>& z) {
    const double dx = x[2 * stall] - z[0];
    const double dy = x[2 * stall + 1] - z[1];
    return std::sqrt(dx * dx + dy * dy);
}

void validate_instance(const FacilityInstance& inst) {
    if (inst.n == 0 || inst.n_x == 0)
        throw std::invalid_argument("FacilityInstance: n and n_x must be positive");
    if (inst.points.size() != inst.n)
        throw std::invalid_argument("FacilityInstance: wrong number of points");
    if (inst.boxes.size() != inst.n_x)
        throw std::invalid_argument("FacilityInstance: wrong number of boxes");
    for (const Box& b : inst.boxes)
        if (!(b.lo[0] <= b.hi[0]) || !(b.lo[1] <= b.hi[1]))
            throw std::invalid_argument("FacilityInstance: box with lo > hi");
    if (inst.p_star.dim() != inst.n)
        throw std::invalid_argument("FacilityInstance: p_star dimension mismatch");
}

} // namespace

FacilityModel::FacilityModel(FacilityInstance instance) : instance_(std::move(instance)) {
    validate_instance(instance_);
}

double facility_cost(const numvec& x, const std::array<double, 2>& point, std::size_t n_x) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_x; ++i)
        worst = std::max(worst, point_distance(x, i, point));
    return worst;
}

numvec FacilityModel::eval(const numvec& x) const {
    if (x.size() != dim_x()) throw std::invalid_argument("FacilityModel::eval: bad dimension");
    numvec costs(instance_.n);
    for (std::size_t k = 0; k < instance_.n; ++k)
        costs[k] = facility_cost(x, instance_.points[k], instance_.n_x);
    return costs;
}

numvec FacilityModel::subgrad(const numvec& x, std::size_t i) const {
    if (x.size() != dim_x()) throw std::invalid_argument("FacilityModel::subgrad: bad dimension");
    if (i >= instance_.n) throw std::invalid_argument("FacilityModel::subgrad: outcome out of range");
    const auto& z = instance_.points[i];
    // Farthest stall, smallest index among ties.
    std::size_t active = 0;
    double worst = point_distance(x, 0, z);
    for (std::size_t s = 1; s < instance_.n_x; ++s) {
        const double d = point_distance(x, s, z);
        if (d > worst) {
            worst = d;
            active = s;
        }
    }
    numvec g(dim_x(), 0.0);
    if (worst > 0.0) {
        g[2 * active] = (x[2 * active] - z[0]) / worst;
        g[2 * active + 1] = (x[2 * active + 1] - z[1]) / worst;
    }
    return g;
}

numvec FacilityModel::project(const numvec& x) const {
    if (x.size() != dim_x()) throw std::invalid_argument("FacilityModel::project: bad dimension");
    numvec out(x);
    for (std::size_t s = 0; s < instance_.n_x; ++s) {
        const Box& b = instance_.boxes[s];
        out[2 * s] = std::clamp(out[2 * s], b.lo[0], b.hi[0]);
        out[2 * s + 1] = std::clamp(out[2 * s + 1], b.lo[1], b.hi[1]);
    }
    return out;
}

numvec FacilityModel::initial_point() const {
    numvec x(dim_x());
    for (std::size_t s = 0; s < instance_.n_x; ++s) {
        const Box& b = instance_.boxes[s];
        x[2 * s] = 0.5 * (b.lo[0] + b.hi[0]);
        x[2 * s + 1] = 0.5 * (b.lo[1] + b.hi[1]);
    }
    return x;
}

FacilityInstance generate_instance(std::uint64_t seed, std::size_t n, std::size_t n_x) {
    if (n == 0 || n_x == 0)
        throw std::invalid_argument("generate_instance: n and n_x must be positive");
    RngStream rng(seed, 0);
    FacilityInstance inst;
    inst.n = n;
    inst.n_x = n_x;
    inst.seed = seed;
    inst.points.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double px = rng.uniform(0.0, 10.0);
        const double py = rng.uniform(0.0, 10.0);
        inst.points.push_back({px, py});
    }
    inst.boxes.reserve(n_x);
    for (std::size_t s = 0; s < n_x; ++s) {
        const double cx = rng.uniform(2.0, 8.0);
        const double cy = rng.uniform(2.0, 8.0);
        const double hx = rng.uniform(0.5, 1.5);
        const double hy = rng.uniform(0.5, 1.5);
        inst.boxes.push_back(Box{{cx - hx, cy - hy}, {cx + hx, cy + hy}});
    }
    numvec weights(n);
    double total = 0.0;
    for (double& w : weights) {
        w = rng.exponential();
        total += w;
    }
    for (double& w : weights) w /= total;
    inst.p_star = ProbVector(std::move(weights));
    return inst;
}

std::vector<numvec> transport_cost_matrix(const FacilityInstance& instance) {
    const std::size_t n = instance.n;
    std::vector<numvec> cost(n, numvec(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = instance.points[i][0] - instance.points[j][0];
            const double dy = instance.points[i][1] - instance.points[j][1];
            const double d = std::sqrt(dx * dx + dy * dy);
            cost[i][j] = d;
            cost[j][i] = d;
        }
    }
    return cost;
}

std::string instance_to_json(const FacilityInstance& instance) {
    validate_instance(instance);
    nlohmann::json j;
    j["n"] = instance.n;
    j["n_x"] = instance.n_x;
    auto& points = j["points"] = nlohmann::json::array();
    for (const auto& p : instance.points) points.push_back({p[0], p[1]});
    auto& boxes = j["boxes"] = nlohmann::json::array();
    for (const Box& b : instance.boxes)
        boxes.push_back({{"min", {b.lo[0], b.lo[1]}}, {"max", {b.hi[0], b.hi[1]}}});
    j["p_star"] = instance.p_star.weights();
    j["seed"] = instance.seed;
    return j.dump(2) + "\n";
}

FacilityInstance instance_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    FacilityInstance inst;
    inst.n = j.at("n").get<std::size_t>();
    inst.n_x = j.at("n_x").get<std::size_t>();
    for (const auto& p : j.at("points"))
        inst.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    for (const auto& b : j.at("boxes")) {
        Box box;
        box.lo = {b.at("min").at(0).get<double>(), b.at("min").at(1).get<double>()};
        box.hi = {b.at("max").at(0).get<double>(), b.at("max").at(1).get<double>()};
        inst.boxes.push_back(box);
    }
    inst.p_star = ProbVector(j.at("p_star").get<numvec>());
    inst.seed = j.value("seed", std::uint64_t{0});
    validate_instance(inst);
    return inst;
}

void save_instance(const std::string& path, const FacilityInstance& instance) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_instance: cannot open " + path);
    out << instance_to_json(instance);
    if (!out) throw std::runtime_error("save_instance: write failed for " + path);
}

FacilityInstance load_instance(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_instance: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return instance_from_json(buf.str());
}

} // namespace cadro
