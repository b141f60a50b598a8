#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "shifttree/errors.hpp"
#include "shifttree/reports.hpp"
#include "shifttree/spec_io.hpp"
#include "shifttree/verify.hpp"

namespace {

using shifttree::OrderedJson;

struct CommonOpts {
    std::string spec_path;
    std::string builtin;
    std::string format = "json";
    std::string out_path;
    std::int64_t n_band = 12;
    std::int64_t n_radius = 60;
    std::int64_t depth = 12;
    std::int64_t fan_d = 5;
    double tol = 1e-12;
    bool rootless = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_spec) {
    if (needs_spec) {
        cmd->add_option("--spec", o.spec_path, "spec file (JSON)");
        cmd->add_option("--builtin", o.builtin, "builtin tree name instead of a file");
    }
    cmd->add_option("--format", o.format, "json | csv | text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    cmd->add_option("--out", o.out_path, "write the report to a file instead of stdout");
    cmd->add_option("--n-band", o.n_band, "block scan order")->check(CLI::Range(1, 64));
    cmd->add_option("--n-radius", o.n_radius, "radius sequence length")
        ->check(CLI::Range(1, 1 << 20));
    cmd->add_option("--depth", o.depth, "truncation depth")->check(CLI::Range(1, 64));
    cmd->add_option("--tol", o.tol, "comparison tolerance")
        ->check(CLI::Range(1e-15, 1e-3));
    cmd->add_flag("--rootless", o.rootless, "require the rootless extension");
}

shifttree::LoadedSpec resolve_spec(const CommonOpts& o) {
    if (!o.spec_path.empty() && !o.builtin.empty())
        throw shifttree::SpecParseError("use either --spec or --builtin, not both");
    if (!o.spec_path.empty()) return shifttree::load_spec_file(o.spec_path);
    if (!o.builtin.empty()) return shifttree::builtin_spec(o.builtin);
    throw shifttree::SpecParseError("a spec file (--spec) or builtin (--builtin) is required");
}

shifttree::ReportConfig to_config(const CommonOpts& o) {
    shifttree::ReportConfig cfg;
    cfg.n_band = o.n_band;
    cfg.n_radius = o.n_radius;
    cfg.depth = o.depth;
    cfg.fan_d = o.fan_d;
    cfg.tol = o.tol;
    return cfg;
}

void emit(const OrderedJson& report, const CommonOpts& o) {
    std::string text;
    if (o.format == "json")
        text = shifttree::render_json(report);
    else if (o.format == "csv")
        text = shifttree::render_csv(report);
    else
        text = shifttree::render_text(report);
    if (o.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(o.out_path, std::ios::binary);
        if (!out) throw shifttree::Error("cannot write to '" + o.out_path + "'");
        out << text;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted shifts on directed trees: models, kernels, spectra"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string command;

    auto* tree_cmd = app.add_subcommand("tree", "tree combinatorics report");
    add_common(tree_cmd, opts, true);
    tree_cmd->callback([&] { command = "tree"; });

    auto* model_cmd = app.add_subcommand("model", "kernel blocks, radius, basis polynomials");
    add_common(model_cmd, opts, true);
    model_cmd->callback([&] { command = "model"; });

    auto* spectra_cmd = app.add_subcommand("spectra", "annuli, indices, kernel dimensions");
    add_common(spectra_cmd, opts, true);
    spectra_cmd->callback([&] { command = "spectra"; });

    auto* table_cmd = app.add_subcommand("table1", "summary table over the builtin trees");
    add_common(table_cmd, opts, false);
    table_cmd->add_option("--fan-d", opts.fan_d, "fan width for the last row")
        ->check(CLI::Range(2, 64));
    table_cmd->callback([&] { command = "table1"; });

    auto* verify_cmd = app.add_subcommand("verify", "run every invariant suite");
    add_common(verify_cmd, opts, true);
    verify_cmd->callback([&] { command = "verify"; });

    CLI11_PARSE(app, argc, argv);

    try {
        if (command == "table1") {
            emit(shifttree::table1_report(to_config(opts)), opts);
            return 0;
        }
        const shifttree::LoadedSpec spec = resolve_spec(opts);
        if (opts.rootless && !spec.rootless())
            throw shifttree::SpecParseError("--rootless requires a back_ray section");

        if (command == "tree") {
            emit(shifttree::tree_report(spec, to_config(opts)), opts);
        } else if (command == "model") {
            emit(shifttree::model_report(spec, to_config(opts)), opts);
        } else if (command == "spectra") {
            emit(shifttree::spectra_report(spec, to_config(opts)), opts);
        } else if (command == "verify") {
            shifttree::VerifyOptions vo;
            vo.n_band = opts.n_band;
            vo.n_radius = opts.n_radius;
            vo.depth = opts.depth;
            vo.tol = opts.tol;
            const shifttree::VerifyReport rep = shifttree::run_verification(spec, vo);
            emit(shifttree::verify_report_json(rep), opts);
            if (!rep.all_pass) return 1;
        }
        return 0;
    } catch (const shifttree::SpecParseError& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return 2;
    } catch (const shifttree::InvalidTree& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return 2;
    } catch (const shifttree::UnknownBuiltin& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return 2;
    } catch (const shifttree::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
