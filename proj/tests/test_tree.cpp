#include "doctest.h"

#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "shifttree/errors.hpp"
#include "shifttree/tree.hpp"

using namespace shifttree;
using namespace shifttree::testing;

TEST_CASE("children of the two-branch root") {
    auto t2 = make_builtin("T2");
    auto kids = t2->children(VertexId::core("(0,0)"));
    REQUIRE(kids.size() == 2);
    CHECK(kids[0] == branch_vertex(1, 1));
    CHECK(kids[1] == branch_vertex(2, 1));
}

TEST_CASE("children along a single chain") {
    auto t1 = make_builtin("T1");
    for (int n = 0; n < 6; ++n) {
        auto kids = t1->children(chain_vertex(n));
        REQUIRE(kids.size() == 1);
        CHECK(kids[0] == chain_vertex(n + 1));
    }
    auto deep = t1->children(VertexId::ray("1", 5));
    REQUIRE(deep.size() == 1);
    CHECK(deep[0] == VertexId::ray("1", 6));
}

TEST_CASE("unknown vertices are rejected") {
    auto t2 = make_builtin("T2");
    CHECK_THROWS_AS(t2->children(VertexId::core("nope")), UnknownVertex);
    CHECK_THROWS_AS(t2->children(VertexId::ray("9", 0)), UnknownVertex);
}

TEST_CASE("generations") {
    auto t3 = make_builtin("T3");
    auto g2 = t3->generation(2);
    REQUIRE(g2.size() == 2);
    CHECK(g2[0] == branch_vertex(2, 1));
    CHECK(g2[1] == branch_vertex(3, 1));

    CHECK(t3->generation(0) == std::vector<VertexId>{t3->root()});
    CHECK(t3->generation(-1).empty());

    auto t1 = make_builtin("T1");
    for (int k = 0; k < 8; ++k) {
        auto g = t1->generation(k);
        REQUIRE(g.size() == 1);
        CHECK(g[0] == chain_vertex(k));
    }
}

TEST_CASE("branching index of the builtins") {
    CHECK(make_builtin("T1")->branching_index() == 0);
    CHECK(make_builtin("T2")->branching_index() == 1);
    CHECK(make_builtin("T3")->branching_index() == 2);
    CHECK(make_builtin("T4")->branching_index() == 3);
    CHECK(make_builtin("Tfan(3)")->branching_index() == 1);

    CHECK(make_builtin("T1")->branching_vertices().empty());
    CHECK(make_builtin("T2")->branching_vertices() ==
          std::vector<VertexId>{VertexId::core("(0,0)")});
    CHECK(make_builtin("T4")->branching_vertices() ==
          std::vector<VertexId>{VertexId::core("(2,2)")});
}

TEST_CASE("windows") {
    auto t2 = make_builtin("T2");
    auto w1 = t2->window(1);
    std::vector<VertexId> expect{branch_vertex(1, 1), branch_vertex(2, 1),
                                 branch_vertex(1, 2), branch_vertex(2, 2)};
    std::sort(expect.begin(), expect.end());
    std::sort(w1.begin(), w1.end());
    CHECK(w1 == expect);

    auto t1 = make_builtin("T1");
    auto w5 = t1->window(5);
    REQUIRE(w5.size() == 1);
    CHECK(w5[0] == chain_vertex(5));

    for (const auto& name : builtin_names()) {
        auto t = make_builtin(name);
        CHECK(t->window(-(t->branching_index() + 1)).empty());
    }
}

TEST_CASE("builtin construction rules") {
    auto fan = make_builtin("Tfan(3)");
    CHECK(fan->children(fan->root()).size() == 3);
    CHECK(fan->branching_index() == 1);

    auto t4 = make_builtin("T4");
    CHECK(t4->branching_vertices().size() == 1);
    CHECK(t4->generation_of(t4->branching_vertices()[0]) == 2);
    auto kids = t4->children(VertexId::core("(2,2)"));
    REQUIRE(kids.size() == 2);
    CHECK(kids[0] == branch_vertex(3, 1));
    CHECK(kids[1] == branch_vertex(4, 1));

    CHECK_THROWS_AS(DirectedTreeSpec::builtin("T9"), UnknownBuiltin);
    CHECK_THROWS_AS(DirectedTreeSpec::builtin("Tfan(1)"), InvalidParam);
    CHECK_THROWS_AS(DirectedTreeSpec::builtin("Tfan(x)"), UnknownBuiltin);
}

TEST_CASE("invalid trees are rejected") {
    // second parent
    CHECK_THROWS_AS(DirectedTreeSpec("r", {{"r", "a"}, {"r", "b"}, {"a", "b"}},
                                     {{"a", "x"}, {"b", "y"}}),
                    InvalidTree);
    // circuit via an edge into the root
    CHECK_THROWS_AS(DirectedTreeSpec("r", {{"r", "a"}, {"a", "r"}}, {{"a", "x"}}),
                    InvalidTree);
    // disconnected vertex
    CHECK_THROWS_AS(DirectedTreeSpec("r", {{"b", "c"}}, {{"r", "x"}, {"c", "y"}}),
                    InvalidTree);
    // leaf (no child anywhere)
    CHECK_THROWS_AS(DirectedTreeSpec("r", {{"r", "a"}}, {{"r", "x"}}), InvalidTree);
    // duplicate ray id
    CHECK_THROWS_AS(DirectedTreeSpec("r", {}, {{"r", "x"}, {"r", "x"}}), InvalidTree);
}

TEST_CASE("generations partition the explored window") {
    for (const auto& name : builtin_names()) {
        auto t = make_builtin(name);
        std::set<VertexId> seen;
        for (std::int64_t n = 0; n <= 12; ++n) {
            for (const auto& v : t->generation(n)) {
                CHECK(t->generation_of(v) == n);
                CHECK(seen.insert(v).second);  // no vertex in two generations
            }
        }
        for (const auto& v : t->vertices_up_to_generation(12)) CHECK(seen.count(v) == 1);
    }
}

TEST_CASE("generation cardinality is constant beyond the branching index") {
    for (const auto& name : builtin_names()) {
        auto t = make_builtin(name);
        const auto kT = t->branching_index();
        const auto stable = t->generation_card(kT);
        for (std::int64_t n = kT; n <= kT + 20; ++n)
            CHECK(t->generation_card(n) == stable);
    }
}

TEST_CASE("parent of every child is the vertex itself") {
    for (const auto& name : builtin_names()) {
        auto t = make_builtin(name);
        for (const auto& v : t->vertices_up_to_generation(8)) {
            for (const auto& c : t->children(v)) {
                auto p = t->parent(c);
                REQUIRE(p.has_value());
                CHECK(*p == v);
            }
        }
        CHECK(!t->parent(t->root()).has_value());
    }
}

TEST_CASE("windows intersect iff the offsets are within the branching index") {
    for (const auto& name : builtin_names()) {
        auto t = make_builtin(name);
        const auto kT = t->branching_index();
        std::vector<std::set<VertexId>> windows;
        for (std::int64_t n = 0; n <= 10; ++n) {
            auto w = t->window(n);
            windows.emplace_back(w.begin(), w.end());
        }
        for (std::int64_t n = 0; n <= 10; ++n) {
            for (std::int64_t m = 0; m <= 10; ++m) {
                bool overlap = false;
                for (const auto& v : windows[static_cast<std::size_t>(n)])
                    overlap = overlap || windows[static_cast<std::size_t>(m)].count(v) > 0;
                CHECK(overlap == (std::abs(n - m) <= kT));
            }
        }
    }
}

TEST_CASE("branching vertices sit strictly below the branching index") {
    for (const auto& name : builtin_names()) {
        auto t = make_builtin(name);
        for (const auto& v : t->branching_vertices())
            CHECK(t->generation_of(v) <= t->branching_index() - 1);
    }
}

TEST_CASE("chi_count walks combined core and ray structure") {
    auto t2 = make_builtin("T2");
    CHECK(t2->chi_count(t2->root(), 0) == 1);
    CHECK(t2->chi_count(t2->root(), 1) == 2);
    CHECK(t2->chi_count(t2->root(), 5) == 2);
    CHECK(t2->chi_count(branch_vertex(1, 1), 3) == 1);

    auto fan = make_builtin("Tfan(5)");
    CHECK(fan->chi_count(fan->root(), 1) == 5);
    CHECK(fan->chi_count(fan->root(), 7) == 5);
}
