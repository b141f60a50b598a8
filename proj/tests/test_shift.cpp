#include "doctest.h"

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "shifttree/errors.hpp"
#include "shifttree/shift.hpp"

using namespace shifttree;
using namespace shifttree::testing;
using doctest::Approx;

namespace {

WeightedShift make_shift(const std::string& name, const WeightAssignment& w) {
    auto tree = make_builtin(name);
    return WeightedShift(tree, w);
}

WeightedShift isometric_shift(const std::string& name) {
    auto tree = make_builtin(name);
    return WeightedShift(tree, isometric_weights(*tree));
}

}  // namespace

TEST_CASE("shift action on a chain") {
    auto tree = make_builtin("T1");
    WeightedShift S(tree, constant_weights(*tree, 2.0));
    auto out = S.apply(SparseVector::basis(chain_vertex(0)));
    REQUIRE(out.size() == 1);
    CHECK(out.at(chain_vertex(1)) == Complex(2.0, 0.0));
    CHECK(S.apply(SparseVector{}).empty());
}

TEST_CASE("shift action spreads over both branches") {
    std::mt19937 rng(7);
    auto tree = make_builtin("T2");
    auto w = random_weights(*tree, rng);
    WeightedShift S(tree, w);
    auto out = S.apply(SparseVector::basis(tree->root()));
    REQUIRE(out.size() == 2);
    CHECK(out.at(branch_vertex(1, 1)) ==
          Complex(w.ray_weights.at("1").at(0), 0.0));
    CHECK(out.at(branch_vertex(2, 1)) ==
          Complex(w.ray_weights.at("2").at(0), 0.0));
}

TEST_CASE("power action accumulates path products") {
    auto tree = make_builtin("T1");
    WeightedShift S(tree, constant_weights(*tree, 2.0));
    auto out = S.apply_power(chain_vertex(0), 2);
    REQUIRE(out.size() == 1);
    CHECK(out.at(chain_vertex(2)) == Complex(4.0, 0.0));
}

TEST_CASE("isometric shifts preserve basis norms under powers") {
    auto S = isometric_shift("T2");
    for (int k = 0; k <= 10; ++k)
        CHECK(S.apply_power(S.tree().root(), k).norm() == Approx(1.0).epsilon(1e-13));
}

TEST_CASE("fan inner product separating the branches") {
    auto tree = make_builtin("Tfan(2)");
    WeightAssignment w;
    w.ray_weights["0"] = RayWeightSeq{{1.1, 1.3}, {1.0}, {}, false};
    w.ray_weights["1"] = RayWeightSeq{{0.9, 0.7}, {1.0}, {}, false};
    WeightedShift S(tree, w);

    const double l10 = 1.1, l11 = 0.9, l20 = 1.3, l21 = 0.7;
    SparseVector g1 = SparseVector::basis(tree->root());
    SparseVector g2;
    g2.add(VertexId::ray("0", 0), Complex(l11, 0.0));
    g2.add(VertexId::ray("1", 0), Complex(-l10, 0.0));

    CHECK(S.apply_adjoint(g2).norm() == Approx(0.0).epsilon(1e-14));

    const Complex ip = S.apply_power(std::move(g1), 2).inner(S.apply(g2));
    CHECK(ip.real() == Approx(l10 * l11 * (l20 * l20 - l21 * l21)).epsilon(1e-13));
    CHECK(ip.imag() == Approx(0.0).epsilon(1e-14));
}

TEST_CASE("adjoint power walks up with path products") {
    auto tree = make_builtin("T1");
    WeightedShift S(tree, constant_weights(*tree, 2.0));
    auto out = S.apply_adjoint_power(chain_vertex(3), 2);
    REQUIRE(out.size() == 1);
    CHECK(out.at(chain_vertex(1)) == Complex(4.0, 0.0));

    for (int k = 1; k <= 4; ++k)
        CHECK(S.apply_adjoint_power(tree->root(), k).empty());
}

TEST_CASE("adjoint pairing on random sparse vectors") {
    std::mt19937 rng(11);
    for (const auto& name : builtin_names()) {
        auto tree = make_builtin(name);
        WeightedShift S(tree, random_weights(*tree, rng));
        for (int trial = 0; trial < 100; ++trial) {
            auto f = random_sparse(*tree, rng);
            auto g = random_sparse(*tree, rng);
            const Complex lhs = S.apply(f).inner(g);
            const Complex rhs = f.inner(S.apply_adjoint(g));
            CHECK(std::abs(lhs - rhs) <=
                  1e-12 * std::max(1.0, std::abs(lhs)));
        }
    }
}

TEST_CASE("column norms") {
    auto tree = make_builtin("T2");
    WeightedShift S(tree, constant_weights(*tree, 1.0));
    CHECK(S.column_norm(tree->root()) == Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(S.column_norm(branch_vertex(1, 2)) == Approx(1.0));

    auto iso = isometric_shift("T4");
    for (const auto& v : iso.tree().vertices_up_to_generation(6))
        CHECK(iso.column_norm(v) == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("power norm identity") {
    std::mt19937 rng(13);
    for (const auto& name : builtin_names()) {
        auto tree = make_builtin(name);
        WeightedShift S(tree, random_weights(*tree, rng));
        for (const auto& uname : tree->core_names()) {
            const VertexId u = VertexId::core(uname);
            for (int k = 1; k <= 8; ++k) {
                const SparseVector fk = S.apply_power(u, k);
                const SparseVector back = S.apply_adjoint_power(fk, k);
                REQUIRE(back.size() == 1);
                CHECK(std::abs(back.at(u) - Complex(fk.squared_norm(), 0.0)) <=
                      1e-12 * fk.squared_norm());
            }
        }
    }
}

TEST_CASE("Cauchy dual weights on the two-branch tree") {
    auto tree = make_builtin("T2");
    WeightAssignment w;
    w.ray_weights["1"] = RayWeightSeq{{1.5, 2.0, 0.5}, {1.25}, {}, false};
    w.ray_weights["2"] = RayWeightSeq{{0.75}, {2.0, 1.0}, {}, false};
    WeightedShift S(tree, w);
    WeightedShift D = S.cauchy_dual();

    const double cn2 = 1.5 * 1.5 + 0.75 * 0.75;
    for (int j = 1; j <= 2; ++j) {
        const std::string id = std::to_string(j);
        CHECK(D.weight(branch_vertex(j, 1)) ==
              Approx(w.ray_weights.at(id).at(0) / cn2).epsilon(1e-15));
        for (int n = 2; n <= 9; ++n)
            CHECK(D.weight(branch_vertex(j, n)) ==
                  Approx(1.0 / w.ray_weights.at(id).at(n - 1)).epsilon(1e-15));
    }
}

TEST_CASE("Cauchy dual fixes isometries and inverts constant chains") {
    auto iso = isometric_shift("T3");
    auto dual = iso.cauchy_dual();
    for (const auto& v : iso.tree().vertices_up_to_generation(6)) {
        if (v == iso.tree().root()) continue;
        CHECK(dual.weight(v) == Approx(iso.weight(v)).epsilon(1e-14));
    }

    auto tree = make_builtin("T1");
    WeightedShift S(tree, constant_weights(*tree, 2.0));
    auto D = S.cauchy_dual();
    for (int n = 1; n <= 10; ++n)
        CHECK(D.weight(chain_vertex(n)) == Approx(0.5).epsilon(1e-15));
}

TEST_CASE("dual adjoint is a left inverse") {
    std::mt19937 rng(17);
    for (const auto& name : builtin_names()) {
        auto tree = make_builtin(name);
        WeightedShift S(tree, random_weights(*tree, rng));
        WeightedShift D = S.cauchy_dual();
        for (int trial = 0; trial < 100; ++trial) {
            auto f = random_sparse(*tree, rng);
            auto back = D.apply_adjoint(S.apply(f));
            back -= f;
            CHECK(back.norm() <= 1e-12 * std::max(1.0, f.norm()));
        }
    }
}

TEST_CASE("left invertibility detects zero weights") {
    auto tree = make_builtin("T2");
    auto w = constant_weights(*tree, 1.0);
    w.ray_weights["1"] = RayWeightSeq{{0.0}, {1.0}, {}, false};
    WeightedShift S(tree, w);
    CHECK(!S.left_invertible());
    CHECK_THROWS_AS(S.cauchy_dual(), NotLeftInvertible);
}

TEST_CASE("powers push supports down the tree") {
    std::mt19937 rng(19);
    auto tree = make_builtin("T3");
    WeightedShift S(tree, random_weights(*tree, rng));
    auto f = random_sparse(*tree, rng, 4);
    for (int k = 0; k <= 6; ++k) {
        auto g = S.apply_power(f, k);
        for (const auto& [v, value] : g) CHECK(tree->generation_of(v) >= k);
    }
}

TEST_CASE("apply is bounded by the top column norm") {
    std::mt19937 rng(23);
    for (const auto& name : builtin_names()) {
        auto tree = make_builtin(name);
        WeightedShift S(tree, random_weights(*tree, rng));
        const double top = S.column_norm_bounds().sup;
        for (int trial = 0; trial < 20; ++trial) {
            auto f = random_sparse(*tree, rng);
            CHECK(S.apply(f).norm() <= top * f.norm() * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("growth roots of simple shifts") {
    auto iso = isometric_shift("T2");
    auto g = iso.spectral_radius(12);
    REQUIRE(g.exact_limit.has_value());
    CHECK(*g.exact_limit == 1.0);
    for (double b : g.roots) CHECK(b == Approx(1.0).epsilon(1e-13));

    auto tree = make_builtin("T1");
    WeightedShift S3(tree, constant_weights(*tree, 3.0));
    auto g3 = S3.spectral_radius(10);
    REQUIRE(g3.exact_limit.has_value());
    CHECK(*g3.exact_limit == Approx(3.0).epsilon(1e-14));

    WeightAssignment alt;
    alt.ray_weights["1"] = RayWeightSeq{{}, {2.0, 0.5}, {}, false};
    WeightedShift Salt(tree, alt);
    auto galt = Salt.spectral_radius(10);
    REQUIRE(galt.exact_limit.has_value());
    CHECK(*galt.exact_limit == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("growth of the dyadic block dual") {
    auto tree = make_builtin("T1");
    WeightAssignment w;
    w.ray_weights["1"] = RayWeightSeq{{}, {}, "dyadic_blocks", false};
    WeightedShift S(tree, w);

    auto primal = S.spectral_radius(16);
    CHECK(!primal.exact_limit.has_value());
    for (double b : primal.roots) CHECK(b == Approx(1.0).epsilon(1e-13));

    auto dual = S.cauchy_dual();
    auto g = dual.spectral_radius(64);
    // runs of doubled weights of every length exist within the scan
    CHECK(g.roots.back() == Approx(2.0).epsilon(1e-12));
}
