#pragma once

#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "shifttree/shift.hpp"
#include "shifttree/tree.hpp"

namespace shifttree::testing {

inline TreePtr make_builtin(const std::string& name) {
    return std::make_shared<const DirectedTreeSpec>(DirectedTreeSpec::builtin(name));
}

// Vertex labels as used in the worked examples: branch j, position i >= 1.
inline VertexId branch_vertex(int j, int i) {
    return VertexId::ray(std::to_string(j), i - 1);
}

// The chain tree's vertex n (n = 0 is the root).
inline VertexId chain_vertex(int n) {
    return n == 0 ? VertexId::core("0") : VertexId::ray("1", n - 1);
}

inline WeightAssignment constant_weights(const DirectedTreeSpec& tree, double w) {
    WeightAssignment out;
    for (const auto& name : tree.core_names())
        if (name != tree.root().token) out.core_weights[name] = w;
    for (const auto& r : tree.rays()) out.ray_weights[r.id] = RayWeightSeq::constant(w);
    return out;
}

inline WeightAssignment random_weights(const DirectedTreeSpec& tree, std::mt19937& rng,
                                       double lo = 0.75, double hi = 1.35) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::uniform_int_distribution<int> len(0, 3), plen(1, 3);
    WeightAssignment out;
    for (const auto& name : tree.core_names())
        if (name != tree.root().token) out.core_weights[name] = dist(rng);
    for (const auto& r : tree.rays()) {
        RayWeightSeq seq;
        const int np = len(rng);
        for (int i = 0; i < np; ++i) seq.prefix.push_back(dist(rng));
        const int nq = plen(rng);
        for (int i = 0; i < nq; ++i) seq.period.push_back(dist(rng));
        out.ray_weights[r.id] = std::move(seq);
    }
    return out;
}

inline SparseVector random_sparse(const DirectedTreeSpec& tree, std::mt19937& rng,
                                  std::int64_t max_gen = 6, int entries = 5) {
    const auto verts = tree.vertices_up_to_generation(max_gen);
    std::uniform_int_distribution<std::size_t> pick(0, verts.size() - 1);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    SparseVector f;
    for (int i = 0; i < entries; ++i)
        f.add(verts[pick(rng)], Complex(val(rng), val(rng)));
    return f;
}

// Weights of the concrete tridiagonal example: branch 1 carries
// (1, 1, sqrt 2, 1, 1, ...), branch 2 carries (1, sqrt 2, 1, 1, ...).
inline WeightAssignment tridiagonal_example_weights() {
    const double rt2 = std::sqrt(2.0);
    WeightAssignment w;
    w.ray_weights["1"] = RayWeightSeq{{1.0, 1.0, rt2}, {1.0}, {}, false};
    w.ray_weights["2"] = RayWeightSeq{{1.0, rt2}, {1.0}, {}, false};
    return w;
}

inline std::vector<std::string> builtin_names() {
    return {"T1", "T2", "T3", "T4", "Tfan(3)", "Tfan(5)"};
}

}  // namespace shifttree::testing
