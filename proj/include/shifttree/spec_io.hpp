#pragma once

#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "shifttree/rootless.hpp"
#include "shifttree/shift.hpp"

namespace shifttree {

// A parsed spec file: tree + weights, plus the optional rootless extension.
struct LoadedSpec {
    TreePtr tree;
    WeightAssignment weights;
    std::optional<BackRaySpec> back;
    double base_weight = 1.0;  // weight of the encoded base vertex (rootless only)

    WeightedShift shift() const { return WeightedShift(tree, weights); }
    bool rootless() const { return back.has_value(); }
    RootlessShift rootless_shift() const {
        if (!back) throw SpecParseError("spec has no back_ray section");
        return RootlessShift(tree, weights, base_weight, *back);
    }
};

// Accepted schema:
//   {
//     "tree": {"root": "...", "core_edges": [["u","v"], ...],
//              "rays": [{"attach": "u", "id": "r"}, ...]}
//     or "builtin": "T1" | "T2" | "T3" | "T4" | "Tfan(d)",
//     "weights": {"core_weights": {"v": w, ...},
//                 "ray_weights": {"r": {"prefix": [...], "period": [...]}
//                                  | {"generator": "dyadic_blocks"}, ...}},
//     "back_ray": {"prefix": [...], "period": [...], "base_weight": w,
//                  "branching": false}         // optional; marks a rootless tree
//   }
// Missing weights fall back to default_weights; a partial weights section
// overrides the defaults entry by entry.
LoadedSpec load_spec(const nlohmann::json& j);
LoadedSpec load_spec_file(const std::string& path);
LoadedSpec load_spec_string(const std::string& text);

// Spec for a named builtin with default weights.
LoadedSpec builtin_spec(const std::string& name);

}  // namespace shifttree
