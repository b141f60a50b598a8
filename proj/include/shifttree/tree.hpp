#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shifttree/vertex.hpp"

namespace shifttree {

struct RayAttachment {
    std::string attach;  // core vertex the ray hangs below
    std::string id;      // ray identifier, unique within the tree
};

// Countably infinite, leafless, locally finite rooted directed tree with
// finite branching index, stored as a finite core plus infinite
// single-child rays.  Immutable after construction; all queries are exact.
class DirectedTreeSpec {
public:
    // Validates and freezes the description.  Throws InvalidTree when the
    // core has circuits, repeated parents, unreachable vertices or a core
    // vertex without any child (leaflessness would fail).
    DirectedTreeSpec(std::string root,
                     std::vector<std::pair<std::string, std::string>> core_edges,
                     std::vector<RayAttachment> rays);

    // Named trees: "T1".."T4" and "Tfan(d)" with d >= 2.
    static DirectedTreeSpec builtin(const std::string& name);
    static DirectedTreeSpec fan(std::int64_t d);

    const VertexId& root() const { return root_; }

    bool contains(const VertexId& v) const;

    // Children in canonical order.  Throws UnknownVertex.
    std::vector<VertexId> children(const VertexId& v) const;

    // Parent, or nullopt for the root.  Throws UnknownVertex.
    std::optional<VertexId> parent(const VertexId& v) const;

    // Generation index n_v (distance from the root).
    std::int64_t generation_of(const VertexId& v) const;

    // Chi^<n>(root) in canonical order; empty for n < 0.
    std::vector<VertexId> generation(std::int64_t n) const;
    std::int64_t generation_card(std::int64_t n) const;

    // W_n = union of generations n .. n + k_T, canonical order.
    std::vector<VertexId> window(std::int64_t n) const;

    // Branching vertices V_< in canonical order.
    const std::vector<VertexId>& branching_vertices() const { return branching_; }

    // k_T: 0 when no vertex branches, else 1 + max generation of V_<.
    std::int64_t branching_index() const { return branching_index_; }

    // card(Chi^<k>(v)) computed combinatorially.
    std::int64_t chi_count(const VertexId& v, std::int64_t k) const;

    // Canonical order: generation-major, then (kind, token, depth).
    bool vertex_less(const VertexId& a, const VertexId& b) const;

    // All vertices with generation <= g, canonical order.
    std::vector<VertexId> vertices_up_to_generation(std::int64_t g) const;

    // Core structure accessors (used by weight validation and reports).
    const std::vector<std::string>& core_names() const { return core_names_; }
    const std::vector<RayAttachment>& rays() const { return rays_; }
    const std::vector<std::pair<std::string, std::string>>& core_edges() const {
        return core_edges_;
    }
    std::int64_t core_generation(const std::string& name) const;
    const std::vector<std::string>& core_children_of(const std::string& name) const;
    const std::vector<std::string>& rays_at(const std::string& name) const;
    const std::string& ray_attach_of(const std::string& ray_id) const;

private:
    void validate_and_index();

    VertexId root_;
    std::vector<std::pair<std::string, std::string>> core_edges_;
    std::vector<RayAttachment> rays_;

    std::vector<std::string> core_names_;                       // sorted
    std::map<std::string, std::string> core_parent_;            // child -> parent
    std::map<std::string, std::vector<std::string>> core_children_;
    std::map<std::string, std::vector<std::string>> core_rays_;  // attach -> ray ids
    std::map<std::string, std::int64_t> core_generation_;
    std::map<std::string, std::int64_t> ray_attach_generation_;  // ray id -> gen(attach)
    std::map<std::string, std::string> ray_attach_;              // ray id -> attach
    std::vector<VertexId> branching_;
    std::int64_t branching_index_ = 0;
    std::int64_t max_core_generation_ = 0;
};

using TreePtr = std::shared_ptr<const DirectedTreeSpec>;

}  // namespace shifttree
