#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace shifttree {

enum class VertexKind : std::uint8_t {
    core = 0,  // named vertex of the finite core
    ray = 1,   // vertex on an infinite single-child ray: (ray id, depth >= 0)
    back = 2,  // ancestor chain vertex of a rootless tree: depth k >= 1
};

// Identifier of a single vertex.  Comparison is structural
// (kind, token, depth) and does not depend on any tree; trees order their
// vertices generation-major on top of this.
struct VertexId {
    VertexKind kind = VertexKind::core;
    std::string token;        // core name or ray id; empty for back vertices
    std::int64_t depth = 0;   // ray depth (>= 0) or back distance (>= 1)

    static VertexId core(std::string name) {
        return VertexId{VertexKind::core, std::move(name), 0};
    }
    static VertexId ray(std::string id, std::int64_t d) {
        return VertexId{VertexKind::ray, std::move(id), d};
    }
    static VertexId back(std::int64_t k) {
        return VertexId{VertexKind::back, {}, k};
    }

    bool is_core() const { return kind == VertexKind::core; }
    bool is_ray() const { return kind == VertexKind::ray; }
    bool is_back() const { return kind == VertexKind::back; }

    // Display form: core "name", ray "id:depth", back "~k".
    std::string display() const {
        switch (kind) {
            case VertexKind::core: return token;
            case VertexKind::ray: return token + ":" + std::to_string(depth);
            case VertexKind::back: return "~" + std::to_string(depth);
        }
        return {};
    }

    friend auto operator<=>(const VertexId&, const VertexId&) = default;
};

}  // namespace shifttree
