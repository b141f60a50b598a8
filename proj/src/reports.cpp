#include "shifttree/reports.hpp"

#include <cmath>
#include <sstream>

#include "shifttree/errors.hpp"
#include "shifttree/model.hpp"
#include "shifttree/spectra.hpp"

namespace shifttree {

namespace {

OrderedJson vertex_list(const std::vector<VertexId>& vs) {
    OrderedJson out = OrderedJson::array();
    for (const auto& v : vs) out.push_back(v.display());
    return out;
}

OrderedJson complex_entry(const Complex& c) { return OrderedJson::array({c.real(), c.imag()}); }

OrderedJson matrix_json(const Eigen::MatrixXcd& m) {
    OrderedJson rows = OrderedJson::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        OrderedJson row = OrderedJson::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_entry(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

OrderedJson annulus_json(const Annulus& a) {
    return OrderedJson{{"inner", a.inner}, {"outer", a.outer}};
}

OrderedJson radius_json(const RadiusEstimate& est) {
    OrderedJson out;
    out["a_seq"] = est.a;
    out["liminf_estimate"] = est.liminf_estimate;
    if (est.exact_limit)
        out["exact_limit"] = *est.exact_limit;
    else
        out["exact_limit"] = nullptr;
    out["lower_bound"] = est.lower_bound;
    out["lower_bound_exact"] = est.lower_bound_exact;
    return out;
}

// Largest |j - k| with a nonvanishing block, scanning j, k <= n_band.
std::int64_t realized_bandwidth(const AnalyticModel& model, std::int64_t n_band,
                                double tol) {
    const auto table = model.band_table(n_band);
    std::int64_t widest = 0;
    for (const auto& [jk, C] : table) {
        if (jk.first == 0 || jk.second == 0) continue;
        if (C.cwiseAbs().maxCoeff() > tol)
            widest = std::max(widest, std::abs(jk.first - jk.second));
    }
    return widest;
}

}  // namespace

std::string bandwidth_name(std::int64_t max_offset) {
    switch (max_offset) {
        case 0: return "diagonal";
        case 1: return "tridiagonal";
        case 2: return "pentadiagonal";
        case 3: return "septadiagonal";
        default:
            return std::to_string(2 * max_offset + 1) + "-diagonal";
    }
}

OrderedJson tree_report(const LoadedSpec& spec, const ReportConfig&) {
    const DirectedTreeSpec& tree = *spec.tree;
    OrderedJson out;
    out["root"] = tree.root().display();
    out["branching_index"] = tree.branching_index();
    out["branching_vertices"] = vertex_list(tree.branching_vertices());
    out["card_branching_vertices"] = tree.branching_vertices().size();
    OrderedJson cards = OrderedJson::array();
    for (std::int64_t n = 0; n <= 10; ++n)
        cards.push_back(OrderedJson{{"n", n}, {"card", tree.generation_card(n)}});
    out["generation_cards"] = cards;
    OrderedJson windows = OrderedJson::array();
    for (std::int64_t n = 0; n <= 10; ++n)
        windows.push_back(OrderedJson{{"n", n}, {"vertices", vertex_list(tree.window(n))}});
    out["windows"] = windows;
    return out;
}

OrderedJson model_report(const LoadedSpec& spec, const ReportConfig& cfg) {
    const WeightedShift S = spec.shift();
    S.require_left_invertible();
    const AnalyticModel model(S);

    OrderedJson out;
    out["dim_e"] = model.dim_e();
    out["branching_index"] = model.band_limit();

    const auto table = model.band_table(cfg.n_band);
    OrderedJson blocks = OrderedJson::array();
    for (const auto& [jk, C] : table) {
        if (jk.first == 0 && jk.second == 0) continue;
        const double top = C.cwiseAbs().maxCoeff();
        if (top <= cfg.tol) continue;
        blocks.push_back(OrderedJson{{"j", jk.first},
                                     {"k", jk.second},
                                     {"max_abs", top},
                                     {"matrix", matrix_json(C)}});
    }
    out["nonzero_blocks"] = blocks;
    const std::int64_t bw = realized_bandwidth(model, cfg.n_band, cfg.tol);
    out["realized_bandwidth"] = bw;
    out["classification"] = bandwidth_name(bw);
    out["radius"] = radius_json(model.radius_of_convergence(cfg.n_radius));

    OrderedJson polys = OrderedJson::array();
    for (const auto& u : spec.tree->vertices_up_to_generation(
             std::min<std::int64_t>(6, cfg.n_band))) {
        const auto poly = model.basis_polynomial(u);
        OrderedJson degrees = OrderedJson::array();
        for (const auto& [deg, coords] : poly.terms) degrees.push_back(deg);
        polys.push_back(OrderedJson{{"vertex", u.display()},
                                    {"degree", poly.degree},
                                    {"nonzero_degrees", degrees},
                                    {"nonzero_count", poly.terms.size()}});
    }
    out["basis_polynomials"] = polys;
    return out;
}

OrderedJson spectra_report(const LoadedSpec& spec, const ReportConfig& cfg) {
    const WeightedShift S = spec.shift();
    S.require_left_invertible();
    const AnalyticModel model(S);

    OrderedJson out;
    out["dim_e"] = model.dim_e();
    out["delta"] = cowen_douglas_delta(S);

    const AnnulusSet annuli = ap_spectrum_annuli(S, cfg.n_radius);
    OrderedJson branch = OrderedJson::array();
    for (const auto& a : annuli.branch_annuli) branch.push_back(annulus_json(a));
    OrderedJson comps = OrderedJson::array();
    for (const auto& a : annuli.components) comps.push_back(annulus_json(a));
    out["branch_annuli"] = branch;
    out["components"] = comps;
    out["annuli_exact"] = annuli.exact;

    // index samples at 0, between the components, and beyond the last one
    std::vector<double> sample_radii{0.0};
    for (std::size_t i = 0; i + 1 < annuli.components.size(); ++i)
        sample_radii.push_back(
            (annuli.components[i].outer + annuli.components[i + 1].inner) / 2.0);
    if (!annuli.components.empty())
        sample_radii.push_back(annuli.components.back().outer + 1.0);
    OrderedJson samples = OrderedJson::array();
    for (double r : sample_radii) {
        const int idx = fredholm_index(S, Complex(r, 0.0), cfg.n_radius);
        samples.push_back(OrderedJson{{"abs_w", r}, {"index", idx}});
    }
    out["index_samples"] = samples;

    OrderedJson dims = OrderedJson::array();
    for (std::int64_t k = 1; k <= 6; ++k)
        dims.push_back(OrderedJson{{"k", k}, {"dim", dim_ker_adjoint_power(S, k)}});
    out["kernel_dims"] = dims;
    out["quotient_dims"] = quotient_dims(S, 6);

    const auto chk = chi_ker_check(*spec.tree);
    out["chi_ker"] = OrderedJson{{"ok", chk.ok},
                                 {"dim_e", chk.dim_e},
                                 {"card_at_branching_index", chk.card_at_branching_index},
                                 {"formula_value", chk.formula_value}};

    std::vector<Complex> ws;
    const double delta = cowen_douglas_delta(S);
    for (int i = 0; i < 4; ++i)
        ws.push_back(std::polar(delta * 0.2 * static_cast<double>(i),
                                0.9 * static_cast<double>(i)));
    const auto ps = point_spectrum_emptiness_check(S, cfg.depth, ws);
    out["point_spectrum_empty"] = ps.pass;
    return out;
}

OrderedJson table1_report(const ReportConfig& cfg) {
    OrderedJson rows = OrderedJson::array();
    std::vector<std::string> names{"T1", "T2", "T3", "T4",
                                   "Tfan(" + std::to_string(cfg.fan_d) + ")"};
    for (const auto& name : names) {
        const LoadedSpec spec = builtin_spec(name);
        const AnalyticModel model(spec.shift());
        const std::int64_t bw = realized_bandwidth(model, cfg.n_band, cfg.tol);
        rows.push_back(OrderedJson{{"tree", name},
                                   {"dim_e", model.dim_e()},
                                   {"branching_index", model.band_limit()},
                                   {"kernel_form", bandwidth_name(bw)}});
    }
    return OrderedJson{{"rows", rows}};
}

OrderedJson verify_report_json(const VerifyReport& rep) {
    OrderedJson checks = OrderedJson::array();
    for (const auto& c : rep.checks)
        checks.push_back(
            OrderedJson{{"id", c.id}, {"pass", c.pass}, {"detail", c.detail}});
    return OrderedJson{{"all_pass", rep.all_pass}, {"checks", checks}};
}

std::string render_json(const OrderedJson& j) { return j.dump(2) + "\n"; }

namespace {

void render_text_walk(const OrderedJson& j, const std::string& indent, std::string& out) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            if (value.is_object() || value.is_array()) {
                out += indent + key + ":\n";
                render_text_walk(value, indent + "  ", out);
            } else {
                out += indent + key + ": " + value.dump() + "\n";
            }
        }
    } else if (j.is_array()) {
        std::size_t i = 0;
        for (const auto& value : j) {
            if (value.is_object() || value.is_array()) {
                out += indent + "- [" + std::to_string(i) + "]\n";
                render_text_walk(value, indent + "  ", out);
            } else {
                out += indent + "- " + value.dump() + "\n";
            }
            ++i;
        }
    } else {
        out += indent + j.dump() + "\n";
    }
}

void render_csv_walk(const OrderedJson& j, const std::string& path, std::string& out) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items())
            render_csv_walk(value, path.empty() ? key : path + "." + key, out);
    } else if (j.is_array()) {
        std::size_t i = 0;
        for (const auto& value : j)
            render_csv_walk(value, path + "[" + std::to_string(i++) + "]", out);
    } else {
        std::string v = j.dump();
        if (v.find(',') != std::string::npos || v.find('"') != std::string::npos) {
            std::string quoted = "\"";
            for (char c : v) {
                if (c == '"') quoted += "\"\"";
                else quoted += c;
            }
            quoted += "\"";
            v = quoted;
        }
        out += path + "," + v + "\n";
    }
}

}  // namespace

std::string render_text(const OrderedJson& j) {
    std::string out;
    render_text_walk(j, "", out);
    return out;
}

std::string render_csv(const OrderedJson& j) {
    std::string out = "path,value\n";
    render_csv_walk(j, "", out);
    return out;
}

}  // namespace shifttree
