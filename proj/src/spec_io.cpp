#include "shifttree/spec_io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "shifttree/errors.hpp"

namespace shifttree {

namespace {

using nlohmann::json;

double require_positive_number(const json& j, const std::string& where) {
    if (!j.is_number())
        throw SpecParseError(where + ": expected a number, got " + std::string(j.type_name()));
    const double v = j.get<double>();
    if (!(v >= 0.0)) throw SpecParseError(where + ": weights must be non-negative");
    return v;
}

std::vector<double> number_list(const json& j, const std::string& where) {
    if (!j.is_array()) throw SpecParseError(where + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : j) out.push_back(require_positive_number(x, where));
    return out;
}

RayWeightSeq parse_ray_seq(const json& j, const std::string& where) {
    if (!j.is_object()) throw SpecParseError(where + ": expected an object");
    RayWeightSeq seq;
    if (j.contains("generator")) {
        seq.generator = j.at("generator").get<std::string>();
        if (j.contains("period"))
            throw SpecParseError(where + ": generator and period are mutually exclusive");
    } else if (j.contains("period")) {
        seq.period = number_list(j.at("period"), where + ".period");
        if (seq.period.empty()) throw SpecParseError(where + ".period: must be non-empty");
    } else {
        throw SpecParseError(where + ": needs either \"period\" or \"generator\"");
    }
    if (j.contains("prefix")) seq.prefix = number_list(j.at("prefix"), where + ".prefix");
    for (const auto& [key, value] : j.items()) {
        if (key != "prefix" && key != "period" && key != "generator")
            throw SpecParseError(where + ": unknown key \"" + key + "\"");
    }
    return seq;
}

TreePtr parse_tree(const json& j) {
    if (!j.is_object()) throw SpecParseError("tree: expected an object");
    if (!j.contains("root")) throw SpecParseError("tree: missing \"root\"");
    std::string root = j.at("root").get<std::string>();
    std::vector<std::pair<std::string, std::string>> edges;
    if (j.contains("core_edges")) {
        const auto& ce = j.at("core_edges");
        if (!ce.is_array()) throw SpecParseError("tree.core_edges: expected an array");
        std::size_t i = 0;
        for (const auto& e : ce) {
            ++i;
            if (!e.is_array() || e.size() != 2)
                throw SpecParseError("tree.core_edges[" + std::to_string(i - 1) +
                                     "]: expected a pair [\"u\",\"v\"]");
            edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
        }
    }
    std::vector<RayAttachment> rays;
    if (j.contains("rays")) {
        const auto& rr = j.at("rays");
        if (!rr.is_array()) throw SpecParseError("tree.rays: expected an array");
        std::size_t i = 0;
        for (const auto& r : rr) {
            ++i;
            if (!r.is_object() || !r.contains("attach") || !r.contains("id"))
                throw SpecParseError("tree.rays[" + std::to_string(i - 1) +
                                     "]: expected {\"attach\": ..., \"id\": ...}");
            rays.push_back({r.at("attach").get<std::string>(), r.at("id").get<std::string>()});
        }
    }
    return std::make_shared<const DirectedTreeSpec>(std::move(root), std::move(edges),
                                                    std::move(rays));
}

}  // namespace

LoadedSpec load_spec(const nlohmann::json& j) {
    if (!j.is_object()) throw SpecParseError("spec: expected a JSON object");
    LoadedSpec spec;
    if (j.contains("tree") == j.contains("builtin"))
        throw SpecParseError("spec: exactly one of \"tree\" or \"builtin\" is required");
    if (j.contains("builtin")) {
        const std::string name = j.at("builtin").get<std::string>();
        try {
            spec.tree = std::make_shared<const DirectedTreeSpec>(
                DirectedTreeSpec::builtin(name));
        } catch (const UnknownBuiltin& e) {
            throw SpecParseError(std::string("spec.builtin: ") + e.what());
        }
    } else {
        spec.tree = parse_tree(j.at("tree"));
    }

    spec.weights = default_weights(*spec.tree);
    if (j.contains("weights")) {
        const auto& w = j.at("weights");
        if (!w.is_object()) throw SpecParseError("weights: expected an object");
        if (w.contains("core_weights")) {
            for (const auto& [name, value] : w.at("core_weights").items())
                spec.weights.core_weights[name] =
                    require_positive_number(value, "weights.core_weights." + name);
        }
        if (w.contains("ray_weights")) {
            for (const auto& [id, value] : w.at("ray_weights").items())
                spec.weights.ray_weights[id] =
                    parse_ray_seq(value, "weights.ray_weights." + id);
        }
    }
    validate_weights(*spec.tree, spec.weights);

    if (j.contains("back_ray")) {
        const auto& b = j.at("back_ray");
        if (!b.is_object()) throw SpecParseError("back_ray: expected an object");
        BackRaySpec back;
        if (!b.contains("period")) throw SpecParseError("back_ray: missing \"period\"");
        back.period = number_list(b.at("period"), "back_ray.period");
        if (back.period.empty()) throw SpecParseError("back_ray.period: must be non-empty");
        if (b.contains("prefix"))
            back.prefix = number_list(b.at("prefix"), "back_ray.prefix");
        if (b.contains("branching")) back.branching = b.at("branching").get<bool>();
        spec.back = back;
        if (!b.contains("base_weight"))
            throw SpecParseError("back_ray: missing \"base_weight\" (weight of the base vertex)");
        spec.base_weight = require_positive_number(b.at("base_weight"), "back_ray.base_weight");
    }
    return spec;
}

LoadedSpec load_spec_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SpecParseError(std::string("JSON parse error: ") + e.what());
    }
    try {
        return load_spec(j);
    } catch (const InvalidTree& e) {
        throw;
    }
}

LoadedSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecParseError("cannot open spec file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return load_spec_string(text);
}

LoadedSpec builtin_spec(const std::string& name) {
    LoadedSpec spec;
    spec.tree = std::make_shared<const DirectedTreeSpec>(DirectedTreeSpec::builtin(name));
    spec.weights = default_weights(*spec.tree);
    return spec;
}

}  // namespace shifttree
