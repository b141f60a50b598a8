#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "shifttree/sparse_vector.hpp"
#include "shifttree/tree.hpp"
#include "shifttree/weights.hpp"

namespace shifttree {

struct ColumnNormBounds {
    double inf = 0.0;
    double sup = 0.0;
};

// n-th root growth data for ||S^n||, n = 1..N.  With eventually periodic
// ray tails the limit is exact: the largest geometric mean of a ray period.
struct GrowthEstimate {
    std::vector<double> roots;  // roots[n-1] = (sup_u ||S^n e_u||)^(1/n)
    std::optional<double> exact_limit;
};

// Weighted shift S on a rooted directed tree: (S f)(v) = weight(v) f(par v)
// for non-root v, and (S f)(root) = 0.  Immutable; operations are pure.
class WeightedShift {
public:
    WeightedShift(TreePtr tree, WeightAssignment weights);

    const DirectedTreeSpec& tree() const { return *tree_; }
    const TreePtr& tree_ptr() const { return tree_; }
    const WeightAssignment& weights() const { return weights_; }

    double weight(const VertexId& v) const;

    SparseVector apply(const SparseVector& f) const;
    SparseVector apply_adjoint(const SparseVector& f) const;
    SparseVector apply_power(const VertexId& u, std::int64_t k) const;
    SparseVector apply_power(SparseVector f, std::int64_t k) const;
    SparseVector apply_adjoint_power(const VertexId& u, std::int64_t k) const;
    SparseVector apply_adjoint_power(SparseVector f, std::int64_t k) const;

    double column_norm(const VertexId& u) const;

    // Exact inf/sup of column norms: scans the core plus one full period of
    // each ray tail (named generators contribute their value range).
    ColumnNormBounds column_norm_bounds() const;

    // ||S|| = sup_u ||S e_u||; exact by the same finite scan.
    double operator_norm() const { return column_norm_bounds().sup; }

    // Positive weights with column norms bounded away from zero.
    bool left_invertible() const;
    void require_left_invertible() const;

    bool all_rays_periodic() const;
    bool has_positive_weights() const;

    // Dual weights w'_v = w_v / ||S e_{par v}||^2; the dual of a shift with
    // periodic ray tails again has periodic ray tails.
    WeightedShift cauchy_dual() const;

    // b_n = ||S^n||^(1/n) for n <= N via per-ray log prefix sums; valid for
    // shifts with strictly positive weights.
    GrowthEstimate spectral_radius(std::int64_t N) const;

    // Sum of log weight(v) over the n vertices walking upward from v
    // (v itself, parent, ... n steps); nullopt when fewer than n ancestors
    // carry weights (the walk would pass the root).
    std::optional<double> log_upward_product(const VertexId& v, std::int64_t n) const;

private:
    TreePtr tree_;
    WeightAssignment weights_;
};

}  // namespace shifttree
