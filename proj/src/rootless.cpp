#include "shifttree/rootless.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "shifttree/errors.hpp"
#include "shifttree/model.hpp"

namespace shifttree {

double BackRaySpec::at(std::int64_t k) const {
    if (k < 1) throw InvalidParam("back chain index must be >= 1");
    const auto p = static_cast<std::int64_t>(prefix.size());
    if (k <= p) return prefix[static_cast<std::size_t>(k - 1)];
    return period[static_cast<std::size_t>((k - 1 - p) %
                                           static_cast<std::int64_t>(period.size()))];
}

VertexId BackwardChain::vertex_at(std::int64_t k) const {
    if (k < 1) throw InvalidParam("back chain index must be >= 1");
    const auto c = static_cast<std::int64_t>(core_vertices.size());
    if (k <= c) return core_vertices[static_cast<std::size_t>(k - 1)];
    return VertexId::back(k - c);
}

double BackwardChain::weight_at(std::int64_t k) const {
    if (k < 1) throw InvalidParam("back chain index must be >= 1");
    const auto c = static_cast<std::int64_t>(core_vertices.size());
    if (k <= c) return core_weights[static_cast<std::size_t>(k - 1)];
    const std::int64_t j = k - c;
    const auto p = static_cast<std::int64_t>(tail_prefix.size());
    if (j <= p) return tail_prefix[static_cast<std::size_t>(j - 1)];
    return tail_period[static_cast<std::size_t>((j - 1 - p) %
                                                static_cast<std::int64_t>(tail_period.size()))];
}

double BackwardChain::tail_geomean() const {
    double s = 0.0;
    for (double w : tail_period) s += std::log(w);
    return std::exp(s / static_cast<double>(tail_period.size()));
}

RootlessShift::RootlessShift(TreePtr rooted_tree, WeightAssignment rooted_weights,
                             double base_weight, BackRaySpec back)
    : tree_(std::move(rooted_tree)),
      weights_(std::move(rooted_weights)),
      rooted_(tree_, weights_),
      base_weight_(base_weight),
      back_(std::move(back)) {
    if (!(base_weight_ >= 0.0))
        throw SpecParseError("the base vertex weight must be non-negative");
    if (back_.period.empty())
        throw SpecParseError("back ray period must be non-empty");
    for (double w : back_.prefix)
        if (!(w >= 0.0)) throw SpecParseError("back ray weights must be non-negative");
    for (double w : back_.period)
        if (!(w >= 0.0)) throw SpecParseError("back ray weights must be non-negative");
}

double RootlessShift::weight(const VertexId& v) const {
    if (v.is_back()) return back_.at(v.depth);
    if (v == tree_->root()) return base_weight_;
    return rooted_.weight(v);
}

SparseVector RootlessShift::apply(const SparseVector& f) const {
    SparseVector out;
    for (const auto& [u, value] : f) {
        if (u.is_back()) {
            // child of ~k is ~(k-1), or the base vertex for k = 1
            if (u.depth == 1)
                out.add(tree_->root(), base_weight_ * value);
            else
                out.add(VertexId::back(u.depth - 1), back_.at(u.depth - 1) * value);
        } else {
            for (const auto& c : tree_->children(u)) out.add(c, rooted_.weight(c) * value);
        }
    }
    return out;
}

SparseVector RootlessShift::apply_adjoint(const SparseVector& f) const {
    SparseVector out;
    for (const auto& [v, value] : f) {
        if (v.is_back()) {
            out.add(VertexId::back(v.depth + 1), back_.at(v.depth) * value);
        } else if (v == tree_->root()) {
            out.add(VertexId::back(1), base_weight_ * value);
        } else {
            out.add(*tree_->parent(v), rooted_.weight(v) * value);
        }
    }
    return out;
}

bool RootlessShift::left_invertible() const {
    if (!rooted_.left_invertible()) return false;
    if (!(base_weight_ > 0.0)) return false;
    for (double w : back_.prefix)
        if (!(w > 0.0)) return false;
    for (double w : back_.period)
        if (!(w > 0.0)) return false;
    return true;
}

std::pair<VertexId, bool> RootlessShift::generalized_root() const {
    if (back_.branching)
        throw NoGeneralizedRoot(
            "no generalized root: every ancestor-chain vertex branches");
    const auto& branching = tree_->branching_vertices();
    if (branching.empty()) return {tree_->root(), false};
    std::vector<VertexId> candidates;
    for (const auto& w : branching) {
        bool clean = true;
        std::optional<VertexId> up = tree_->parent(w);
        while (up) {
            if (tree_->children(*up).size() != 1) {
                clean = false;
                break;
            }
            up = tree_->parent(*up);
        }
        if (clean) candidates.push_back(w);
    }
    if (candidates.size() != 1)
        throw NoGeneralizedRoot("no generalized root: the ancestor chain branches");
    return {candidates.front(), true};
}

std::int64_t RootlessShift::branching_index() const {
    const auto& branching = tree_->branching_vertices();
    if (branching.empty()) return 0;
    std::int64_t max_gen = 0, min_gen = std::numeric_limits<std::int64_t>::max();
    for (const auto& v : branching) {
        max_gen = std::max(max_gen, tree_->generation_of(v));
        min_gen = std::min(min_gen, tree_->generation_of(v));
    }
    // All branching vertices descend from the generalized root, which sits
    // at the minimal branching generation.
    return 1 + (max_gen - min_gen);
}

RootlessDecomposition RootlessShift::decompose() const {
    if (!left_invertible())
        throw NotLeftInvertible("rootless shift is not left-invertible");
    auto [omega, unique] = generalized_root();

    // Subtree at omega: reachable core vertices and their rays.
    std::set<std::string> keep;
    std::deque<std::string> queue{omega.token};
    keep.insert(omega.token);
    while (!queue.empty()) {
        std::string u = queue.front();
        queue.pop_front();
        for (const auto& c : tree_->core_children_of(u)) {
            keep.insert(c);
            queue.push_back(c);
        }
    }
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& [u, v] : tree_->core_edges())
        if (keep.count(u) && keep.count(v)) edges.emplace_back(u, v);
    std::vector<RayAttachment> rays;
    WeightAssignment sub_weights;
    for (const auto& r : tree_->rays()) {
        if (!keep.count(r.attach)) continue;
        rays.push_back(r);
        sub_weights.ray_weights[r.id] = weights_.ray_weights.at(r.id);
    }
    for (const auto& name : keep)
        if (name != omega.token) sub_weights.core_weights[name] = weights_.core_weights.at(name);

    auto subtree = std::make_shared<const DirectedTreeSpec>(omega.token, std::move(edges),
                                                            std::move(rays));

    RootlessDecomposition deco{
        WeightedShift(subtree, std::move(sub_weights)), omega, unique, 0.0, {}, 0};
    deco.m_index = branching_index();

    // Weight of omega inside the full tree.
    deco.omega_weight = omega == tree_->root()
                            ? base_weight_
                            : weights_.core_weights.at(omega.token);

    // Ancestors of omega: the remaining core chain, then the back ray.
    std::optional<VertexId> up = tree_->parent(omega);
    while (up) {
        deco.back.core_vertices.push_back(*up);
        deco.back.core_weights.push_back(*up == tree_->root()
                                             ? base_weight_
                                             : weights_.core_weights.at(up->token));
        up = tree_->parent(*up);
    }
    deco.back.tail_prefix = back_.prefix;
    deco.back.tail_period = back_.period;
    return deco;
}

RootlessIndexReport RootlessShift::index_relation() const {
    if (!left_invertible()) throw NotFredholm("shift is not left-invertible");
    const RootlessDecomposition deco = decompose();

    RootlessIndexReport rep;
    std::int64_t branch_defect = 0;  // sum (card(Chi(v)) - 1) over branching vertices
    for (const auto& v : tree_->branching_vertices())
        branch_defect += static_cast<std::int64_t>(tree_->children(v).size()) - 1;
    rep.ind_shift = -branch_defect;
    rep.ind_model = -(1 + branch_defect);
    rep.relation_holds = rep.ind_shift == rep.ind_model + 1;

    rep.rooted_essential = ap_spectrum_annuli(deco.rooted);
    const double g = deco.back.tail_geomean();
    rep.back_essential = Annulus{g, g};

    std::vector<Annulus> all = rep.rooted_essential.branch_annuli;
    all.push_back(rep.back_essential);
    std::sort(all.begin(), all.end(),
              [](const Annulus& a, const Annulus& b) { return a.inner < b.inner; });
    for (const auto& an : all) {
        if (!rep.union_components.empty() && an.inner <= rep.union_components.back().outer)
            rep.union_components.back().outer =
                std::max(rep.union_components.back().outer, an.outer);
        else
            rep.union_components.push_back(an);
    }
    return rep;
}

SelfCommutatorReport RootlessShift::self_commutator_blocks(std::int64_t G) const {
    const RootlessDecomposition deco = decompose();
    const WeightedShift& T = deco.rooted;
    const double lw = deco.omega_weight;
    const VertexId v1 = deco.back.vertex_at(1);

    auto back_apply = [&](const SparseVector& f) {
        SparseVector out;
        for (const auto& [u, value] : f) {
            // B e_{v_k} = w(k-1) e_{v_{k-1}}, B e_{v_1} = 0.
            std::int64_t k = 0;
            for (std::int64_t i = 1;; ++i) {
                if (deco.back.vertex_at(i) == u) {
                    k = i;
                    break;
                }
                if (i > G + 4) throw Error("vertex off the back chain");
            }
            if (k >= 2) out.add(deco.back.vertex_at(k - 1), deco.back.weight_at(k - 1) * value);
        }
        return out;
    };
    auto back_adjoint = [&](const SparseVector& f) {
        SparseVector out;
        for (const auto& [u, value] : f) {
            std::int64_t k = 0;
            for (std::int64_t i = 1;; ++i) {
                if (deco.back.vertex_at(i) == u) {
                    k = i;
                    break;
                }
                if (i > G + 4) throw Error("vertex off the back chain");
            }
            out.add(deco.back.vertex_at(k + 1), deco.back.weight_at(k) * value);
        }
        return out;
    };

    SelfCommutatorReport rep;
    rep.max_off_split = 0.0;
    rep.max_block_mismatch = 0.0;

    auto measure = [&](const VertexId& u, bool in_rooted_part) {
        const SparseVector e = SparseVector::basis(u);
        SparseVector direct = apply_adjoint(apply(e));
        direct -= apply(apply_adjoint(e));

        SparseVector block;
        if (in_rooted_part) {
            block = T.apply_adjoint(T.apply(e));
            block -= T.apply(T.apply_adjoint(e));
            block -= Complex(lw * lw, 0.0) * e.at(deco.omega) * SparseVector::basis(deco.omega);
        } else {
            block = Complex(lw * lw, 0.0) * e.at(v1) * SparseVector::basis(v1);
            block += back_adjoint(back_apply(e));
            block -= back_apply(back_adjoint(e));
        }

        // component of the direct action crossing the split
        for (const auto& [v, value] : direct) {
            const bool v_in_rooted = !v.is_back() && deco.rooted.tree().contains(v);
            if (v_in_rooted != in_rooted_part)
                rep.max_off_split = std::max(rep.max_off_split, std::abs(value));
        }
        SparseVector diff = direct;
        diff -= block;
        for (const auto& [v, value] : diff)
            rep.max_block_mismatch = std::max(rep.max_block_mismatch, std::abs(value));
    };

    for (const auto& u : deco.rooted.tree().vertices_up_to_generation(G))
        measure(u, true);
    for (std::int64_t k = 1; k <= G; ++k) measure(deco.back.vertex_at(k), false);

    rep.pass = rep.max_off_split == 0.0 && rep.max_block_mismatch == 0.0;
    return rep;
}

}  // namespace shifttree
