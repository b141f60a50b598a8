#include "shifttree/tree.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "shifttree/errors.hpp"

namespace shifttree {

DirectedTreeSpec::DirectedTreeSpec(
    std::string root,
    std::vector<std::pair<std::string, std::string>> core_edges,
    std::vector<RayAttachment> rays)
    : root_(VertexId::core(std::move(root))),
      core_edges_(std::move(core_edges)),
      rays_(std::move(rays)) {
    validate_and_index();
}

void DirectedTreeSpec::validate_and_index() {
    if (root_.token.empty())
        throw InvalidTree("root vertex name must be non-empty");

    std::set<std::string> names;
    names.insert(root_.token);
    for (const auto& [u, v] : core_edges_) {
        if (u.empty() || v.empty())
            throw InvalidTree("core edge with empty vertex name");
        names.insert(u);
        names.insert(v);
    }
    for (const auto& r : rays_) {
        if (r.id.empty())
            throw InvalidTree("ray id must be non-empty");
        if (r.id.find(':') != std::string::npos)
            throw InvalidTree("ray id '" + r.id + "' must not contain ':'");
        names.insert(r.attach);
    }
    for (const auto& n : names) {
        if (n.find(':') != std::string::npos)
            throw InvalidTree("core vertex name '" + n + "' must not contain ':'");
    }

    core_names_.assign(names.begin(), names.end());

    // Parent map; each non-root vertex gets exactly one parent edge.
    std::size_t edge_index = 0;
    for (const auto& [u, v] : core_edges_) {
        ++edge_index;
        if (v == root_.token)
            throw InvalidTree("core edge " + std::to_string(edge_index) + " [" + u +
                              " -> " + v + "]: the root cannot have a parent");
        auto [it, inserted] = core_parent_.emplace(v, u);
        if (!inserted)
            throw InvalidTree("core edge " + std::to_string(edge_index) + " [" + u +
                              " -> " + v + "]: vertex '" + v +
                              "' already has parent '" + it->second + "'");
        core_children_[u].push_back(v);
    }
    for (const auto& n : names) {
        if (n != root_.token && !core_parent_.count(n))
            throw InvalidTree("vertex '" + n + "' is disconnected (no parent edge)");
    }

    // BFS layering from the root; reaching every vertex rules out circuits.
    std::deque<std::string> queue{root_.token};
    core_generation_[root_.token] = 0;
    while (!queue.empty()) {
        std::string u = queue.front();
        queue.pop_front();
        auto it = core_children_.find(u);
        if (it == core_children_.end()) continue;
        for (const auto& c : it->second) {
            if (core_generation_.count(c))
                throw InvalidTree("vertex '" + c + "' is reachable twice (circuit)");
            core_generation_[c] = core_generation_.at(u) + 1;
            queue.push_back(c);
        }
    }
    for (const auto& n : names) {
        if (!core_generation_.count(n))
            throw InvalidTree("vertex '" + n + "' is not reachable from the root");
    }

    std::set<std::string> ray_ids;
    std::size_t ray_index = 0;
    for (const auto& r : rays_) {
        ++ray_index;
        if (!ray_ids.insert(r.id).second)
            throw InvalidTree("ray " + std::to_string(ray_index) + ": duplicate ray id '" +
                              r.id + "'");
        if (!names.count(r.attach))
            throw InvalidTree("ray '" + r.id + "' attaches at unknown vertex '" +
                              r.attach + "'");
        core_rays_[r.attach].push_back(r.id);
        ray_attach_generation_[r.id] = core_generation_.at(r.attach);
        ray_attach_[r.id] = r.attach;
    }

    for (auto& [u, cs] : core_children_) std::sort(cs.begin(), cs.end());
    for (auto& [u, rs] : core_rays_) std::sort(rs.begin(), rs.end());

    // Leaflessness: every core vertex needs at least one child.
    for (const auto& n : names) {
        bool has_core_child = core_children_.count(n) && !core_children_.at(n).empty();
        bool has_ray = core_rays_.count(n) && !core_rays_.at(n).empty();
        if (!has_core_child && !has_ray)
            throw InvalidTree("vertex '" + n + "' has no child; trees must be leafless");
    }

    // Branching vertices and k_T.  Only core vertices can branch.
    std::int64_t max_branch_gen = -1;
    std::vector<std::pair<std::int64_t, std::string>> branch_order;
    for (const auto& n : names) {
        std::int64_t degree = 0;
        if (auto it = core_children_.find(n); it != core_children_.end())
            degree += static_cast<std::int64_t>(it->second.size());
        if (auto it = core_rays_.find(n); it != core_rays_.end())
            degree += static_cast<std::int64_t>(it->second.size());
        if (degree >= 2) {
            branch_order.emplace_back(core_generation_.at(n), n);
            max_branch_gen = std::max(max_branch_gen, core_generation_.at(n));
        }
        max_core_generation_ = std::max(max_core_generation_, core_generation_.at(n));
    }
    std::sort(branch_order.begin(), branch_order.end());
    for (const auto& [g, n] : branch_order) branching_.push_back(VertexId::core(n));
    branching_index_ = branch_order.empty() ? 0 : 1 + max_branch_gen;
}

bool DirectedTreeSpec::contains(const VertexId& v) const {
    switch (v.kind) {
        case VertexKind::core:
            return core_generation_.count(v.token) > 0;
        case VertexKind::ray:
            return v.depth >= 0 && ray_attach_.count(v.token) > 0;
        case VertexKind::back:
            return false;
    }
    return false;
}

static const std::vector<std::string> kNoNames;

const std::vector<std::string>& DirectedTreeSpec::core_children_of(
    const std::string& name) const {
    auto it = core_children_.find(name);
    return it == core_children_.end() ? kNoNames : it->second;
}

const std::vector<std::string>& DirectedTreeSpec::rays_at(const std::string& name) const {
    auto it = core_rays_.find(name);
    return it == core_rays_.end() ? kNoNames : it->second;
}

const std::string& DirectedTreeSpec::ray_attach_of(const std::string& ray_id) const {
    auto it = ray_attach_.find(ray_id);
    if (it == ray_attach_.end()) throw UnknownVertex("unknown ray '" + ray_id + "'");
    return it->second;
}

std::int64_t DirectedTreeSpec::core_generation(const std::string& name) const {
    auto it = core_generation_.find(name);
    if (it == core_generation_.end())
        throw UnknownVertex("unknown core vertex '" + name + "'");
    return it->second;
}

std::vector<VertexId> DirectedTreeSpec::children(const VertexId& v) const {
    if (!contains(v)) throw UnknownVertex("unknown vertex '" + v.display() + "'");
    if (v.is_ray()) return {VertexId::ray(v.token, v.depth + 1)};
    std::vector<VertexId> out;
    for (const auto& c : core_children_of(v.token)) out.push_back(VertexId::core(c));
    for (const auto& r : rays_at(v.token)) out.push_back(VertexId::ray(r, 0));
    return out;
}

std::optional<VertexId> DirectedTreeSpec::parent(const VertexId& v) const {
    if (!contains(v)) throw UnknownVertex("unknown vertex '" + v.display() + "'");
    if (v.is_ray()) {
        if (v.depth > 0) return VertexId::ray(v.token, v.depth - 1);
        return VertexId::core(ray_attach_.at(v.token));
    }
    auto it = core_parent_.find(v.token);
    if (it == core_parent_.end()) return std::nullopt;
    return VertexId::core(it->second);
}

std::int64_t DirectedTreeSpec::generation_of(const VertexId& v) const {
    if (!contains(v)) throw UnknownVertex("unknown vertex '" + v.display() + "'");
    if (v.is_ray()) return ray_attach_generation_.at(v.token) + 1 + v.depth;
    return core_generation_.at(v.token);
}

std::vector<VertexId> DirectedTreeSpec::generation(std::int64_t n) const {
    std::vector<VertexId> out;
    if (n < 0) return out;
    for (const auto& name : core_names_) {
        if (core_generation_.at(name) == n) out.push_back(VertexId::core(name));
    }
    for (const auto& r : rays_) {
        std::int64_t depth = n - ray_attach_generation_.at(r.id) - 1;
        if (depth >= 0) out.push_back(VertexId::ray(r.id, depth));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::int64_t DirectedTreeSpec::generation_card(std::int64_t n) const {
    if (n < 0) return 0;
    std::int64_t count = 0;
    for (const auto& name : core_names_) {
        if (core_generation_.at(name) == n) ++count;
    }
    for (const auto& r : rays_) {
        if (n > ray_attach_generation_.at(r.id)) ++count;
    }
    return count;
}

std::vector<VertexId> DirectedTreeSpec::window(std::int64_t n) const {
    std::vector<VertexId> out;
    for (std::int64_t j = n; j <= n + branching_index_; ++j) {
        auto g = generation(j);
        out.insert(out.end(), g.begin(), g.end());
    }
    return out;
}

std::int64_t DirectedTreeSpec::chi_count(const VertexId& v, std::int64_t k) const {
    if (!contains(v)) throw UnknownVertex("unknown vertex '" + v.display() + "'");
    if (k < 0) return 0;
    if (k == 0) return 1;
    if (v.is_ray()) return 1;
    std::int64_t count = 0;
    // Descend through the core; any path entering a ray stays single.
    std::deque<std::pair<std::string, std::int64_t>> queue{{v.token, k}};
    while (!queue.empty()) {
        auto [name, remaining] = queue.front();
        queue.pop_front();
        if (remaining == 0) {
            ++count;
            continue;
        }
        for (const auto& c : core_children_of(name)) queue.emplace_back(c, remaining - 1);
        count += static_cast<std::int64_t>(rays_at(name).size());
    }
    return count;
}

bool DirectedTreeSpec::vertex_less(const VertexId& a, const VertexId& b) const {
    auto ga = generation_of(a), gb = generation_of(b);
    if (ga != gb) return ga < gb;
    return a < b;
}

std::vector<VertexId> DirectedTreeSpec::vertices_up_to_generation(std::int64_t g) const {
    std::vector<VertexId> out;
    for (std::int64_t n = 0; n <= g; ++n) {
        auto layer = generation(n);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

DirectedTreeSpec DirectedTreeSpec::fan(std::int64_t d) {
    if (d < 2) throw InvalidParam("Tfan requires d >= 2");
    std::vector<RayAttachment> rays;
    for (std::int64_t i = 0; i < d; ++i)
        rays.push_back({"(0,0)", std::to_string(i)});
    return DirectedTreeSpec("(0,0)", {}, std::move(rays));
}

DirectedTreeSpec DirectedTreeSpec::builtin(const std::string& name) {
    if (name == "T1") return DirectedTreeSpec("0", {}, {{"0", "1"}});
    if (name == "T2")
        return DirectedTreeSpec("(0,0)", {}, {{"(0,0)", "1"}, {"(0,0)", "2"}});
    if (name == "T3")
        return DirectedTreeSpec("(0,0)", {{"(0,0)", "(1,1)"}},
                                {{"(1,1)", "2"}, {"(1,1)", "3"}});
    if (name == "T4")
        return DirectedTreeSpec("(0,0)", {{"(0,0)", "(1,1)"}, {"(1,1)", "(2,2)"}},
                                {{"(2,2)", "3"}, {"(2,2)", "4"}});
    if (name.rfind("Tfan(", 0) == 0 && name.back() == ')') {
        const std::string num = name.substr(5, name.size() - 6);
        try {
            std::size_t pos = 0;
            long long d = std::stoll(num, &pos);
            if (pos != num.size()) throw std::invalid_argument(num);
            return fan(d);
        } catch (const InvalidParam&) {
            throw;
        } catch (const std::exception&) {
            throw UnknownBuiltin("malformed fan parameter in '" + name + "'");
        }
    }
    throw UnknownBuiltin("unknown builtin tree '" + name + "'");
}

}  // namespace shifttree
