#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pullgraph/catalog.hpp"
#include "pullgraph/graph.hpp"

using namespace pullgraph;

namespace {

std::vector<std::string> strings(const Graph& g, const std::vector<Path>& paths) {
    std::vector<std::string> out;
    for (const auto& p : paths) out.push_back(to_string(g, p));
    return out;
}

bool has_kind(const std::vector<Violation>& v, ViolationKind kind) {
    for (const auto& x : v)
        if (x.kind == kind) return true;
    return false;
}

}  // namespace

TEST_CASE("extended naturals") {
    ExtNat inf = ExtNat::infinity();
    CHECK(ExtNat(2) + ExtNat(3) == ExtNat(5));
    CHECK(ExtNat(7) + inf == inf);
    CHECK(inf + ExtNat(7) == inf);
    CHECK(ExtNat(3) < inf);
    CHECK(ExtNat(2) < ExtNat(3));
    CHECK_FALSE(inf < inf);
    CHECK(inf.admits_index(1000000));
    CHECK_FALSE(ExtNat(2).admits_index(2));
    CHECK(inf.to_string() == "inf");
    CHECK_THROWS_AS(ExtNat(UINT64_MAX) + ExtNat(1), std::overflow_error);

    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> pick(0, 5);
    auto draw = [&] { int k = pick(rng); return k == 5 ? inf : ExtNat(static_cast<std::uint64_t>(k)); };
    for (int i = 0; i < 200; ++i) {
        ExtNat a = draw(), b = draw(), c = draw();
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(((a < b) || (b < a) || (a == b)));
    }
}

TEST_CASE("validation reports every violation") {
    CHECK(validate_graph(catalog_get("toeplitz").data()).empty());

    GraphData unknown{"bad", {"a"}, {{"e", "a", "zz", 1}}};
    CHECK(has_kind(validate_graph(unknown), ViolationKind::UnknownVertex));

    GraphData dup{"bad", {"a", "b"}, {{"e", "a", "b", 1}, {"e", "b", "a", 1}}};
    auto v = validate_graph(dup);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == ViolationKind::DuplicateLabel);

    GraphData many{"bad", {"a", "a"}, {{"e", "a", "b", 0}}};
    auto w = validate_graph(many);
    CHECK(has_kind(w, ViolationKind::DuplicateVertex));
    CHECK(has_kind(w, ViolationKind::UnknownVertex));
    CHECK(has_kind(w, ViolationKind::ZeroMultiplicity));

    CHECK_THROWS_AS(Graph{unknown}, GraphError);
}

TEST_CASE("empty graph is valid and predicates hold vacuously") {
    Graph g(GraphData{"empty", {}, {}});
    CHECK(g.vertex_count() == 0);
    CHECK(loop_free(g));
    CHECK(short_loops_at(g, {}).empty());
    CHECK(enumerate_all_paths(g, 3, 3).empty());
}

TEST_CASE("vertex classification") {
    auto toeplitz = catalog_get("toeplitz");
    CHECK(classify_vertex(toeplitz, "w2") == VertexClass::Sink);
    CHECK(classify_vertex(toeplitz, "w1") == VertexClass::Regular);
    CHECK(classify_vertex(catalog_get("podles"), "v1") == VertexClass::InfiniteEmitter);
    CHECK(classify_vertex(catalog_get("circle"), "v") == VertexClass::Regular);
    CHECK_THROWS_AS(classify_vertex(toeplitz, "nope"), GraphError);
}

TEST_CASE("path enumeration") {
    auto circle = catalog_get("circle");
    CHECK(strings(circle, enumerate_paths(circle, "v", "v", 2, 4)) == std::vector<std::string>{"v", "e", "e.e"});

    auto toeplitz = catalog_get("toeplitz");
    CHECK(strings(toeplitz, enumerate_paths(toeplitz, "w1", "w2", 3, 4)) ==
          std::vector<std::string>{"t2", "t1.t2", "t1.t1.t2"});

    auto podles = catalog_get("podles");
    CHECK(strings(podles, enumerate_paths(podles, "v1", "v2", 1, 2)) ==
          std::vector<std::string>{"e[0]", "e[1]", "e[2]"});

    CHECK_THROWS_AS(enumerate_paths(toeplitz, "zz", std::nullopt, 2, 2), GraphError);
}

TEST_CASE("canonical order is strict and deterministic") {
    for (const auto& spec : catalog_sample_specs()) {
        auto g = catalog_get(spec);
        for (std::size_t v = 0; v < g.vertex_count(); ++v) {
            auto first = enumerate_paths(g, v, std::nullopt, 4, 2);
            auto second = enumerate_paths(g, v, std::nullopt, 4, 2);
            CHECK(first == second);
            for (std::size_t i = 1; i < first.size(); ++i) CHECK(first[i - 1] < first[i]);
            for (const auto& p : first) CHECK(g.is_valid(p));
        }
    }
}

TEST_CASE("prolongation comparison") {
    auto g = catalog_get("toeplitz");
    CHECK(prolongation_compare(parse_path(g, "t1"), parse_path(g, "t1.t2")) == PrefixRelation::APrefixOfB);
    CHECK(prolongation_compare(parse_path(g, "t1.t2"), parse_path(g, "t1")) == PrefixRelation::BPrefixOfA);
    CHECK(prolongation_compare(parse_path(g, "t2"), parse_path(g, "t1.t2")) == PrefixRelation::Incomparable);
    CHECK(prolongation_compare(parse_path(g, "w1"), parse_path(g, "w1")) == PrefixRelation::Equal);
    CHECK(prolongation_compare(parse_path(g, "w1"), parse_path(g, "t1.t2")) == PrefixRelation::APrefixOfB);
    CHECK(prolongation_compare(parse_path(g, "w2"), parse_path(g, "t1.t2")) == PrefixRelation::Incomparable);
}

TEST_CASE("prolongation agrees with explicit concatenation") {
    for (const char* spec : {"toeplitz", "cuntz:2", "rp2q", "ball:2", "podles", "enm:1,2"}) {
        auto g = catalog_get(spec);
        auto paths = enumerate_all_paths(g, 5, 1);
        for (const auto& a : paths) {
            for (const auto& b : paths) {
                auto rel = prolongation_compare(a, b);
                auto sym = prolongation_compare(b, a);
                bool ab = oracles::is_prefix(a, b);
                bool ba = oracles::is_prefix(b, a);
                CHECK((rel == PrefixRelation::APrefixOfB || rel == PrefixRelation::Equal) == ab);
                CHECK((rel == PrefixRelation::BPrefixOfA || rel == PrefixRelation::Equal) == ba);
                CHECK((rel == PrefixRelation::Incomparable) == (sym == PrefixRelation::Incomparable));
                if (rel == PrefixRelation::Equal) CHECK(a == b);
            }
        }
    }
}

TEST_CASE("pointed paths") {
    auto g = catalog_get("toeplitz");
    CHECK(is_pointed(g, parse_path(g, "t1.t2")));
    CHECK_FALSE(is_pointed(g, parse_path(g, "t1")));
    CHECK_FALSE(is_pointed(g, parse_path(g, "w1")));

    for (const char* spec : {"toeplitz", "rp2q", "eq_sphere", "enm:2,2"}) {
        auto h = catalog_get(spec);
        auto paths = enumerate_all_paths(h, 3, 1);
        for (const auto& p : paths)
            for (const auto& q : paths)
                if (!q.is_vertex() && h.range(p) == q.base) CHECK(is_pointed(h, concat(h, p, q)) == is_pointed(h, q));
    }
}

TEST_CASE("loop freeness and short loops") {
    CHECK(loop_free(catalog_get("podles")));
    CHECK(loop_free(catalog_get("cpn:3")));
    CHECK_FALSE(loop_free(catalog_get("toeplitz")));
    CHECK_FALSE(loop_free(catalog_get("h_cycle:3")));

    auto toeplitz = catalog_get("toeplitz");
    CHECK(short_loops_at(toeplitz, parse_vertex_set(toeplitz, "w2")).empty());
    CHECK(short_loops_at(toeplitz, parse_vertex_set(toeplitz, "w1")) ==
          std::vector<std::size_t>{toeplitz.bundle_index("t1")});

    // The Cuntz graph stores its m loops as one bundle of multiplicity m.
    auto cuntz = catalog_get("cuntz:2");
    auto loops = short_loops_at(cuntz, parse_vertex_set(cuntz, "1"));
    REQUIRE(loops.size() == 1);
    CHECK(cuntz.bundle(loops[0]).mult == ExtNat(2));

    CHECK_THROWS_AS(parse_vertex_set(toeplitz, "w1,zz"), GraphError);
}

TEST_CASE("path text round-trips") {
    for (const char* spec : {"toeplitz", "podles", "cuntz:3", "enm:2,2"}) {
        auto g = catalog_get(spec);
        for (const auto& p : enumerate_all_paths(g, 3, 2)) CHECK(parse_path(g, to_string(g, p)) == p);
    }
    auto g = catalog_get("toeplitz");
    CHECK_THROWS_AS(parse_path(g, "t2.t1"), GraphError);
    CHECK_THROWS_AS(parse_path(g, "t1[1]"), GraphError);
}

TEST_CASE("isomorphism search") {
    auto ball = catalog_get("ball:1");
    auto toeplitz = catalog_get("toeplitz");
    CHECK(find_isomorphism(ball, toeplitz).has_value());
    CHECK_FALSE(find_isomorphism(catalog_get("podles"), toeplitz).has_value());
    CHECK_FALSE(find_isomorphism(catalog_get("cuntz:2"), catalog_get("cuntz:3")).has_value());
}
