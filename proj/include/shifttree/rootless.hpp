#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "shifttree/shift.hpp"
#include "shifttree/spectra.hpp"

namespace shifttree {

// Weights of the ancestor chain ~1, ~2, ... above the encoded base vertex.
// The branching flag marks inputs whose ancestor chain branches at every
// vertex (the lattice pattern); such trees have no generalized root.
struct BackRaySpec {
    std::vector<double> prefix;
    std::vector<double> period;  // non-empty
    bool branching = false;

    double at(std::int64_t k) const;  // weight of ~k, k >= 1
};

// The ancestor chain v_k = par^<k>(omega), k >= 1: first the core vertices
// between omega and the encoded base, then the back ray.
struct BackwardChain {
    std::vector<VertexId> core_vertices;
    std::vector<double> core_weights;
    std::vector<double> tail_prefix;
    std::vector<double> tail_period;

    VertexId vertex_at(std::int64_t k) const;  // k >= 1
    double weight_at(std::int64_t k) const;
    double tail_geomean() const;
};

struct RootlessDecomposition {
    WeightedShift rooted;   // weighted shift on the subtree rooted at omega
    VertexId omega;
    bool omega_unique = true;  // false when no vertex branches
    double omega_weight = 0.0;  // scalar of the rank-one coupling e_omega (x) e_{v_1}
    BackwardChain back;
    std::int64_t m_index = 0;  // equals the branching index of the subtree
};

struct RootlessIndexReport {
    std::int64_t ind_shift = 0;      // -dim ker S*
    std::int64_t ind_model = 0;      // -dim E of the rooted part
    bool relation_holds = false;     // ind_shift == ind_model + 1
    AnnulusSet rooted_essential;     // sigma_e of the rooted multiplication operator
    Annulus back_essential;          // sigma_e of the backward factor
    std::vector<Annulus> union_components;
};

struct SelfCommutatorReport {
    double max_off_split = 0.0;      // component crossing the splitting
    double max_block_mismatch = 0.0;  // block action vs direct action
    bool pass = false;
};

// Left-invertible weighted shift on a rootless directed tree, encoded as a
// rooted tree plus one infinite ancestor chain below nothing: every vertex
// carries a weight, including the encoded base vertex.
class RootlessShift {
public:
    RootlessShift(TreePtr rooted_tree, WeightAssignment rooted_weights,
                  double base_weight, BackRaySpec back);

    const DirectedTreeSpec& rooted_tree() const { return *tree_; }
    const BackRaySpec& back_spec() const { return back_; }
    double base_weight() const { return base_weight_; }

    double weight(const VertexId& v) const;
    SparseVector apply(const SparseVector& f) const;
    SparseVector apply_adjoint(const SparseVector& f) const;

    bool left_invertible() const;

    // The unique branching vertex all of whose ancestors are single-child;
    // the encoded base with unique=false when nothing branches.  Throws
    // NoGeneralizedRoot when the ancestor chain itself branches.
    std::pair<VertexId, bool> generalized_root() const;

    // Smallest m with Chi^<k>(V_<) disjoint from V_< for every k >= m.
    std::int64_t branching_index() const;

    RootlessDecomposition decompose() const;

    RootlessIndexReport index_relation() const;

    // Verifies on basis vectors within depth G that the self-commutator
    // acts block-diagonally across the split, matching
    // ([T*,T] - f(x)f) (+) (g(x)g - [B*,B]).
    SelfCommutatorReport self_commutator_blocks(std::int64_t G) const;

private:
    TreePtr tree_;
    WeightAssignment weights_;
    WeightedShift rooted_;  // the same weights viewed on the rooted part
    double base_weight_;
    BackRaySpec back_;
};

}  // namespace shifttree
