#include "shifttree/weights.hpp"

#include <cmath>

#include "shifttree/errors.hpp"

namespace shifttree {

static double dyadic_blocks_value(std::int64_t k) {
    // 1-based index along the ray.  Blocks of 1/2 occupy [2^n+1, 3*2^(n-1)]
    // for n >= 2; everything else is 1.
    if (k <= 4) return 1.0;
    std::int64_t p = 4;  // 2^n starting at n = 2
    while (p < k) {
        if (k <= p + p / 2) return 0.5;  // p + p/2 == 3 * 2^(n-1)
        p *= 2;
    }
    return 1.0;
}

bool generator_known(const std::string& name) { return name == "dyadic_blocks"; }

double generator_value(const std::string& name, std::int64_t d) {
    if (name == "dyadic_blocks") return dyadic_blocks_value(d + 1);
    throw InvalidParam("unknown weight generator '" + name + "'");
}

std::pair<double, double> generator_bounds(const std::string& name) {
    if (name == "dyadic_blocks") return {0.5, 1.0};
    throw InvalidParam("unknown weight generator '" + name + "'");
}

double RayWeightSeq::at(std::int64_t d) const {
    if (d < 0) throw InvalidParam("ray depth must be non-negative");
    if (d < static_cast<std::int64_t>(prefix.size()))
        return prefix[static_cast<std::size_t>(d)];
    const std::int64_t offset = d - static_cast<std::int64_t>(prefix.size());
    if (!generator.empty()) {
        // Generator depths count from the start of the ray, not the prefix.
        double g = generator_value(generator, d);
        return invert_tail ? 1.0 / g : g;
    }
    double v = period[static_cast<std::size_t>(offset % static_cast<std::int64_t>(period.size()))];
    return invert_tail ? 1.0 / v : v;
}

WeightAssignment isometric_weights(const DirectedTreeSpec& tree) {
    WeightAssignment w;
    for (const auto& name : tree.core_names()) {
        const auto deg = static_cast<double>(tree.core_children_of(name).size() +
                                             tree.rays_at(name).size());
        const double child_weight = 1.0 / std::sqrt(deg);
        for (const auto& c : tree.core_children_of(name)) w.core_weights[c] = child_weight;
        for (const auto& r : tree.rays_at(name))
            w.ray_weights[r] = RayWeightSeq{{child_weight}, {1.0}, {}, false};
    }
    return w;
}

WeightAssignment default_weights(const DirectedTreeSpec& tree) {
    WeightAssignment w;
    for (const auto& name : tree.core_names()) {
        if (name != tree.root().token) w.core_weights[name] = 1.0;
    }
    std::size_t i = 0;
    for (const auto& r : tree.rays())
        w.ray_weights[r.id] = RayWeightSeq::constant(1.0 + 0.25 * static_cast<double>(i++));
    return w;
}

void validate_weights(const DirectedTreeSpec& tree, const WeightAssignment& w) {
    for (const auto& name : tree.core_names()) {
        if (name == tree.root().token) continue;
        auto it = w.core_weights.find(name);
        if (it == w.core_weights.end())
            throw SpecParseError("missing weight for core vertex '" + name + "'");
        if (!(it->second >= 0.0) || !std::isfinite(it->second))
            throw SpecParseError("weight for core vertex '" + name +
                                 "' must be finite and non-negative");
    }
    for (const auto& [name, value] : w.core_weights) {
        if (name == tree.root().token)
            throw SpecParseError("the root '" + name + "' carries no weight");
        bool known = false;
        for (const auto& n : tree.core_names()) known |= (n == name);
        if (!known) throw SpecParseError("weight for unknown core vertex '" + name + "'");
    }
    for (const auto& r : tree.rays()) {
        auto it = w.ray_weights.find(r.id);
        if (it == w.ray_weights.end())
            throw SpecParseError("missing weight sequence for ray '" + r.id + "'");
        const RayWeightSeq& seq = it->second;
        if (seq.generator.empty() && seq.period.empty())
            throw SpecParseError("ray '" + r.id + "': periodic tail must be non-empty");
        if (!seq.generator.empty()) {
            if (!generator_known(seq.generator))
                throw SpecParseError("ray '" + r.id + "': unknown generator '" +
                                     seq.generator + "'");
            if (!seq.period.empty())
                throw SpecParseError("ray '" + r.id +
                                     "': generator and period are mutually exclusive");
        }
        for (double v : seq.prefix) {
            if (!(v >= 0.0) || !std::isfinite(v))
                throw SpecParseError("ray '" + r.id +
                                     "': prefix weights must be finite and non-negative");
        }
        for (double v : seq.period) {
            if (!(v >= 0.0) || !std::isfinite(v))
                throw SpecParseError("ray '" + r.id +
                                     "': period weights must be finite and non-negative");
        }
    }
    for (const auto& [id, seq] : w.ray_weights) {
        bool known = false;
        for (const auto& r : tree.rays()) known |= (r.id == id);
        if (!known) throw SpecParseError("weight sequence for unknown ray '" + id + "'");
    }
}

}  // namespace shifttree
