#include "shifttree/verify.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <set>
#include <sstream>

#include "shifttree/errors.hpp"
#include "shifttree/model.hpp"
#include "shifttree/spectra.hpp"

namespace shifttree {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

SparseVector random_sparse(const DirectedTreeSpec& tree, std::mt19937& rng,
                           std::int64_t max_gen, int entries) {
    const auto verts = tree.vertices_up_to_generation(max_gen);
    std::uniform_int_distribution<std::size_t> pick(0, verts.size() - 1);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    SparseVector f;
    for (int i = 0; i < entries; ++i) f.add(verts[pick(rng)], Complex(val(rng), val(rng)));
    return f;
}

void check_tree(VerifyReport& rep, const DirectedTreeSpec& tree) {
    {
        bool ok = true;
        std::set<VertexId> seen;
        for (std::int64_t n = 0; n <= 12; ++n) {
            for (const auto& v : tree.generation(n)) {
                ok = ok && tree.generation_of(v) == n && seen.insert(v).second;
            }
        }
        rep.add("tree.generation_partition", ok,
                "generations 0..12 are disjoint and consistent");
    }
    {
        const auto kT = tree.branching_index();
        const auto stable = tree.generation_card(kT);
        bool ok = true;
        for (std::int64_t n = kT; n <= kT + 20; ++n)
            ok = ok && tree.generation_card(n) == stable;
        rep.add("tree.generation_card_constant", ok,
                "card = " + std::to_string(stable) + " from generation " +
                    std::to_string(kT));
    }
    {
        bool ok = true;
        for (const auto& v : tree.vertices_up_to_generation(8)) {
            for (const auto& c : tree.children(v)) {
                auto p = tree.parent(c);
                ok = ok && p && *p == v;
            }
        }
        rep.add("tree.parent_child_identity", ok);
    }
    {
        const auto kT = tree.branching_index();
        bool ok = true;
        std::vector<std::set<VertexId>> windows;
        for (std::int64_t n = 0; n <= 10; ++n) {
            auto w = tree.window(n);
            windows.emplace_back(w.begin(), w.end());
        }
        for (std::int64_t n = 0; n <= 10; ++n) {
            for (std::int64_t m = 0; m <= 10; ++m) {
                bool overlap = false;
                for (const auto& v : windows[static_cast<std::size_t>(n)])
                    overlap = overlap || windows[static_cast<std::size_t>(m)].count(v) > 0;
                ok = ok && overlap == (std::abs(n - m) <= kT);
            }
        }
        rep.add("tree.window_intersection", ok,
                "windows 0..10 overlap exactly when offsets stay within " +
                    std::to_string(kT));
    }
    {
        bool ok = true;
        for (const auto& v : tree.branching_vertices())
            ok = ok && tree.generation_of(v) <= tree.branching_index() - 1;
        rep.add("tree.branching_below_index", ok);
    }
}

void check_shift(VerifyReport& rep, const WeightedShift& S, const VerifyOptions& opt) {
    const DirectedTreeSpec& tree = S.tree();
    std::mt19937 rng(20240901);
    {
        bool ok = true;
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            auto f = random_sparse(tree, rng, 6, 5);
            auto g = random_sparse(tree, rng, 6, 5);
            const Complex lhs = S.apply(f).inner(g);
            const Complex rhs = f.inner(S.apply_adjoint(g));
            const double err = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
            worst = std::max(worst, err);
            ok = ok && err <= opt.tol;
        }
        rep.add("shift.adjoint_pairing", ok, "max relative error " + fmt(worst));
    }
    {
        bool ok = true;
        for (const auto& uname : tree.core_names()) {
            const VertexId u = VertexId::core(uname);
            for (int k = 1; k <= 8; ++k) {
                const SparseVector fk = S.apply_power(u, k);
                SparseVector back = S.apply_adjoint_power(fk, k);
                back.add(u, Complex(-fk.squared_norm(), 0.0));
                ok = ok && back.norm() <= opt.tol * std::max(1.0, fk.squared_norm());
            }
        }
        rep.add("shift.power_norm_identity", ok, "core vertices, powers up to 8");
    }
    {
        bool ok = true;
        for (int k = 0; k <= 6; ++k) {
            auto f = random_sparse(tree, rng, 4, 5);
            auto g = S.apply_power(f, k);
            for (const auto& [v, value] : g) ok = ok && tree.generation_of(v) >= k;
        }
        rep.add("shift.analytic_support", ok,
                "k-th power supports live at generation k or deeper");
    }
    {
        bool ok = true;
        const double top = S.column_norm_bounds().sup;
        for (int trial = 0; trial < 50; ++trial) {
            auto f = random_sparse(tree, rng, 6, 5);
            ok = ok && S.apply(f).norm() <= top * f.norm() * (1.0 + opt.tol);
        }
        rep.add("shift.bounded_by_column_norms", ok, "operator norm " + fmt(top));
    }
    {
        WeightedShift D = S.cauchy_dual();
        bool ok = true;
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            auto f = random_sparse(tree, rng, 6, 5);
            auto back = D.apply_adjoint(S.apply(f));
            back -= f;
            const double err = back.norm() / std::max(1.0, f.norm());
            worst = std::max(worst, err);
            ok = ok && err <= opt.tol;
        }
        rep.add("shift.dual_left_inverse", ok, "max relative error " + fmt(worst));
    }
}

void check_model(VerifyReport& rep, const WeightedShift& S, const VerifyOptions& opt) {
    const AnalyticModel model(S);
    const DirectedTreeSpec& tree = S.tree();
    const int d = model.dim_e();
    std::mt19937 rng(20240902);

    {
        bool ok = true;
        std::int64_t expect = 1;
        for (const auto& v : tree.branching_vertices())
            expect += static_cast<std::int64_t>(tree.children(v).size()) - 1;
        ok = ok && d == expect;
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                const Complex ip = model.basis().vectors[static_cast<std::size_t>(a)].inner(
                    model.basis().vectors[static_cast<std::size_t>(b)]);
                ok = ok && std::abs(ip - (a == b ? Complex(1, 0) : Complex(0, 0))) <= opt.tol;
            }
            ok = ok &&
                 S.apply_adjoint(model.basis().vectors[static_cast<std::size_t>(a)]).norm() <=
                     opt.tol;
        }
        rep.add("model.cokernel_basis", ok,
                "dim " + std::to_string(d) + ", orthonormal, annihilated by the adjoint");
    }
    {
        const auto table = model.band_table(opt.n_band);
        const std::int64_t band = model.band_limit();
        double worst = 0.0;
        // blocks beyond the band are structurally absent from the table;
        // recompute a few directly to confirm they vanish
        bool ok = true;
        for (std::int64_t j = 0; j + band + 1 <= opt.n_band; ++j) {
            const auto C = model.coefficient_block(j, j + band + 1);
            worst = std::max(worst, C.cwiseAbs().maxCoeff());
            ok = ok && C.cwiseAbs().maxCoeff() <= opt.tol;
        }
        // first row/column of blocks vanish
        for (std::int64_t j = 1; j <= std::min<std::int64_t>(opt.n_band, band); ++j) {
            const auto it = table.find({j, 0});
            if (it != table.end()) {
                worst = std::max(worst, it->second.cwiseAbs().maxCoeff());
                ok = ok && it->second.cwiseAbs().maxCoeff() <= opt.tol;
            }
        }
        rep.add("model.band_vanishing", ok, "largest off-band entry " + fmt(worst));
    }
    {
        const auto table = model.band_table(std::min<std::int64_t>(opt.n_band, 8));
        bool ok = true;
        double worst = 0.0;
        for (const auto& [jk, C] : table) {
            auto it = table.find({jk.second, jk.first});
            if (it == table.end()) continue;
            const double err = (C - it->second.adjoint()).cwiseAbs().maxCoeff();
            worst = std::max(worst, err);
            ok = ok && err <= opt.tol;
        }
        rep.add("model.block_symmetry", ok, "max deviation " + fmt(worst));
    }
    {
        bool ok = true;
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            auto f = random_sparse(tree, rng, 6, 5);
            const auto cf = model.model_coefficients(f).coeffs;
            const auto cSf = model.model_coefficients(S.apply(f)).coeffs;
            ok = ok && cSf.size() == cf.size() + 1;
            if (!ok) break;
            double err = cSf[0].norm();
            for (std::size_t n = 0; n < cf.size(); ++n)
                err = std::max(err, (cSf[n + 1] - cf[n]).norm());
            worst = std::max(worst, err);
            ok = ok && err <= opt.tol * std::max(1.0, f.norm());
        }
        rep.add("model.intertwining", ok,
                "degree shift under the shift action, max error " + fmt(worst));
    }
    {
        bool ok = true;
        for (int trial = 0; trial < 50; ++trial) {
            auto f = random_sparse(tree, rng, 10, 4);
            if (f.norm() == 0.0) continue;
            double peak = 0.0;
            for (const auto& c : model.model_coefficients(f).coeffs)
                peak = std::max(peak, c.norm());
            ok = ok && peak > 1e-10 * f.norm();
        }
        rep.add("model.injectivity_proxy", ok,
                "nonzero vectors keep a nonzero coefficient");
    }
    {
        // pairwise orthogonality of the shifted cokernel spaces forces a
        // diagonal block table
        bool orthogonal = true;
        std::vector<std::vector<SparseVector>> img(9);
        img[0] = model.basis().vectors;
        for (int k = 1; k <= 8; ++k) {
            for (const auto& f : img[static_cast<std::size_t>(k - 1)])
                img[static_cast<std::size_t>(k)].push_back(S.apply(f));
        }
        for (int j = 0; j <= 8 && orthogonal; ++j)
            for (int k = j + 1; k <= 8 && orthogonal; ++k)
                for (const auto& a : img[static_cast<std::size_t>(j)])
                    for (const auto& b : img[static_cast<std::size_t>(k)])
                        orthogonal = orthogonal && std::abs(a.inner(b)) <= 1e-11;
        if (orthogonal) {
            bool ok = true;
            double worst = 0.0;
            for (std::int64_t j = 0; j <= 8; ++j) {
                for (std::int64_t k = 0; k <= 8; ++k) {
                    if (j == k) continue;
                    const double top = model.coefficient_block(j, k).cwiseAbs().maxCoeff();
                    worst = std::max(worst, top);
                    ok = ok && top <= 1e-11;
                }
            }
            rep.add("model.tensor_split", ok,
                    "orthogonal shifted blocks give a diagonal table; max " + fmt(worst));
        } else {
            rep.add("model.tensor_split", true, "shifted blocks not orthogonal (no claim)");
        }
    }
    {
        const double r = model.evaluation_radius();
        bool ok = true;
        double floor = 0.0;
        for (int ri = 1; ri <= 5; ++ri) {
            for (int ai = 0; ai < 5; ++ai) {
                const double rad = 0.12 * static_cast<double>(ri) * r;
                const double ang = 2.0 * M_PI * static_cast<double>(ai) / 5.0;
                const Complex z = std::polar(rad, ang);
                const Eigen::MatrixXcd K = model.kernel_partial_sum(z, z, opt.n_repro);
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(
                    (K + K.adjoint()) / 2.0);
                floor = std::min(floor, eig.eigenvalues().minCoeff());
                ok = ok && eig.eigenvalues().minCoeff() >= -1e-9;
            }
        }
        rep.add("model.kernel_psd", ok, "eigenvalue floor " + fmt(floor));
    }
    {
        const RadiusEstimate est = model.radius_of_convergence(opt.n_radius);
        bool ok = est.liminf_estimate >= est.lower_bound - 1e-9;
        std::string detail = "liminf estimate " + fmt(est.liminf_estimate) +
                             ", lower bound " + fmt(est.lower_bound);
        if (est.exact_limit) {
            ok = ok && *est.exact_limit >= est.lower_bound - 1e-9;
            detail += ", exact limit " + fmt(*est.exact_limit);
        }
        rep.add("model.radius_bounds", ok, detail);
    }
}

void check_spectra(VerifyReport& rep, const WeightedShift& S, const VerifyOptions& opt) {
    const DirectedTreeSpec& tree = S.tree();
    const AnalyticModel model(S);
    const int dim_e = model.dim_e();
    std::mt19937 rng(20240903);

    {
        bool ok = true;
        std::string detail;
        for (std::int64_t k = 1; k <= 5; ++k) {
            const std::int64_t formula = dim_ker_adjoint_power(S, k);
            const auto m =
                truncated_adjoint_power_matrix(S, k, k + tree.branching_index());
            const std::int64_t oracle = numerical_nullity(m, 1e-9);
            ok = ok && formula == oracle;
            detail += (k > 1 ? " " : "") + std::to_string(formula);
        }
        rep.add("spectra.kernel_dim_oracle", ok, "dims " + detail);
    }
    {
        const auto dims = quotient_dims(S, 6);
        bool ok = true;
        for (auto q : dims) ok = ok && q == dim_e;
        rep.add("spectra.quotient_dims", ok,
                "all quotients equal dim E = " + std::to_string(dim_e));
    }
    {
        const auto chk = chi_ker_check(tree);
        rep.add("spectra.chi_ker", chk.ok,
                "stable generation card " + std::to_string(chk.card_at_branching_index));
    }
    {
        const auto deco = unilateral_decomposition(S);
        bool ok = static_cast<int>(deco.branches.size()) == dim_e;
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            auto f = random_sparse(tree, rng, 8, 6);
            SparseVector diff = deco.apply_blocks(S, f);
            diff -= S.apply(f);
            worst = std::max(worst, diff.norm());
            ok = ok && diff.norm() == 0.0;
        }
        rep.add("spectra.decomposition_reassembly", ok,
                std::to_string(deco.branches.size()) + " branches, max deviation " +
                    fmt(worst));
    }
    {
        const RadiusEstimate est = model.radius_of_convergence(opt.n_radius);
        const GrowthEstimate primal = S.spectral_radius(64);
        const GrowthEstimate dual = S.cauchy_dual().spectral_radius(64);
        const double r_lambda = est.exact_limit ? *est.exact_limit : est.liminf_estimate;
        const double r_primal = primal.exact_limit ? *primal.exact_limit
                                                   : primal.roots.back();
        const double r_dual = dual.exact_limit ? *dual.exact_limit : dual.roots.back();
        const bool ok1 = r_lambda * r_dual >= 1.0 - 1e-9;
        const bool ok2 = r_primal * r_dual >= 1.0 - 1e-9;
        rep.add("spectra.radius_products", ok1 && ok2,
                "r*r(dual) = " + fmt(r_lambda * r_dual) +
                    ", r(shift)*r(dual) = " + fmt(r_primal * r_dual) +
                    (est.exact_limit ? " (exact)" : " (numeric margin)"));
    }
    {
        const double delta = cowen_douglas_delta(S);
        const RadiusEstimate est = model.radius_of_convergence(32);
        const double r_lambda = est.exact_limit ? *est.exact_limit : est.liminf_estimate;
        const double rad = std::min(delta, r_lambda) / 2.0;
        bool ok = true;
        double worst = 0.0;
        for (int ai = 0; ai < 10; ++ai) {
            const Complex w = std::polar(rad * (ai % 2 ? 1.0 : 0.6),
                                         2.0 * M_PI * static_cast<double>(ai) / 10.0);
            const auto field = cowen_douglas_field(S, w, 80);
            worst = std::max(worst, field.residual);
            ok = ok && field.residual <= field.tail_bound * (1.0 + 1e-9) + 1e-12;
            ok = ok && static_cast<int>(field.vectors.size()) == dim_e;
            ok = ok && field.gram_det > 1e-9;
        }
        rep.add("spectra.cowen_douglas_field", ok,
                "max residual " + fmt(worst) + " within the tail bound");
    }
    {
        const double delta = cowen_douglas_delta(S);
        std::vector<Complex> ws;
        for (int i = 0; i < 6; ++i)
            ws.push_back(std::polar(delta * 0.15 * static_cast<double>(i),
                                    0.7 * static_cast<double>(i)));
        const auto chk = point_spectrum_emptiness_check(S, opt.depth, ws);
        rep.add("spectra.point_spectrum_empty", chk.pass,
                "smallest truncated singular values stay above delta - |w|");
    }
    {
        const double delta = cowen_douglas_delta(S);
        const std::int64_t G = 6;
        std::vector<SparseVector> span;
        for (int i = 0; i < 20; ++i) {
            const Complex w = std::polar(delta * (0.2 + 0.025 * static_cast<double>(i)),
                                         2.0 * M_PI * static_cast<double>(i) / 20.0);
            const auto field = cowen_douglas_field(S, w, 40);
            for (const auto& v : field.vectors) span.push_back(v);
        }
        const auto m = pack_truncated_columns(tree, span, G);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
        const auto& sv = svd.singularValues();
        std::int64_t rank = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) >= 1e-10 * sv(0)) ++rank;
        const auto want =
            static_cast<std::int64_t>(tree.vertices_up_to_generation(G).size());
        rep.add("spectra.eigenvector_density", rank == want,
                "span rank " + std::to_string(rank) + " of " + std::to_string(want));
    }
}

void check_rootless(VerifyReport& rep, const LoadedSpec& spec, const VerifyOptions& opt) {
    RootlessShift S = spec.rootless_shift();
    std::mt19937 rng(20240904);
    try {
        auto [omega, unique] = S.generalized_root();
        rep.add("rootless.generalized_root", true,
                "omega = " + omega.display() + (unique ? "" : " (nothing branches)"));
    } catch (const NoGeneralizedRoot& e) {
        rep.add("rootless.generalized_root", false, e.what());
        return;
    }

    const auto deco = S.decompose();
    {
        bool ok = deco.rooted.tree().branching_index() == deco.m_index;
        rep.add("rootless.branching_index_match", ok,
                "subtree index " + std::to_string(deco.rooted.tree().branching_index()) +
                    " = m = " + std::to_string(deco.m_index));
    }
    {
        bool ok = true;
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            // mix rooted-part vertices and back-chain vertices
            SparseVector f = random_sparse(deco.rooted.tree(), rng, 6, 4);
            std::uniform_int_distribution<int> kpick(1, 6);
            std::uniform_real_distribution<double> val(-1.0, 1.0);
            f.add(deco.back.vertex_at(kpick(rng)), Complex(val(rng), val(rng)));

            SparseVector direct = S.apply(f);
            // blocks: rooted action + rank-one coupling + backward action
            SparseVector f1, f2;
            for (const auto& [v, value] : f) {
                if (!v.is_back() && deco.rooted.tree().contains(v))
                    f1.set(v, value);
                else
                    f2.set(v, value);
            }
            SparseVector blocks = deco.rooted.apply(f1);
            const Complex at_v1 = f2.at(deco.back.vertex_at(1));
            if (at_v1 != Complex(0.0, 0.0))
                blocks.add(deco.omega, deco.omega_weight * at_v1);
            for (const auto& [v, value] : f2) {
                if (v == deco.back.vertex_at(1)) continue;
                std::int64_t k = 2;
                while (deco.back.vertex_at(k) != v) ++k;
                blocks.add(deco.back.vertex_at(k - 1), deco.back.weight_at(k - 1) * value);
            }
            SparseVector diff = direct;
            diff -= blocks;
            worst = std::max(worst, diff.norm());
            ok = ok && diff.norm() == 0.0;
        }
        rep.add("rootless.decomposition_reassembly", ok, "max deviation " + fmt(worst));
    }
    {
        const auto idx = S.index_relation();
        rep.add("rootless.index_relation", idx.relation_holds,
                "ind shift " + std::to_string(idx.ind_shift) + " = ind model " +
                    std::to_string(idx.ind_model) + " + 1");
    }
    {
        const auto sc = S.self_commutator_blocks(std::min<std::int64_t>(opt.depth, 8));
        rep.add("rootless.self_commutator_blocks", sc.pass,
                "off-split " + fmt(sc.max_off_split) + ", mismatch " +
                    fmt(sc.max_block_mismatch));
    }
    {
        // restricting to the rooted part reproduces the same model data
        const AnalyticModel direct(deco.rooted);
        bool ok = direct.dim_e() >= 1;
        const auto est = direct.radius_of_convergence(24);
        if (est.exact_limit) ok = ok && *est.exact_limit > 0.0;
        rep.add("rootless.extension", ok,
                "rooted part models with dim E = " + std::to_string(direct.dim_e()));
    }
}

}  // namespace

VerifyReport run_verification(const LoadedSpec& spec, const VerifyOptions& opt) {
    VerifyReport rep;
    check_tree(rep, *spec.tree);

    const WeightedShift S = spec.shift();
    if (!S.left_invertible()) {
        rep.add("shift.left_invertible", false,
                "column norms reach zero; model checks skipped");
        return rep;
    }
    rep.add("shift.left_invertible", true,
            "column norms within [" + fmt(S.column_norm_bounds().inf) + ", " +
                fmt(S.column_norm_bounds().sup) + "]");

    check_shift(rep, S, opt);
    check_model(rep, S, opt);
    check_spectra(rep, S, opt);
    if (spec.rootless()) check_rootless(rep, spec, opt);
    return rep;
}

}  // namespace shifttree
