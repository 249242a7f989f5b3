#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pullgraph/catalog.hpp"
#include "pullgraph/subsets.hpp"

using namespace pullgraph;

namespace {

Graph single_edge() { return Graph(GraphData{"single", {"v", "w"}, {{"e", "v", "w", 1}}}); }

// Every vertex set of a small graph, as bit masks.
std::vector<VertexSet> all_subsets(const Graph& g) {
    std::vector<VertexSet> out;
    std::size_t n = g.vertex_count();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        VertexSet s;
        for (std::size_t v = 0; v < n; ++v)
            if (mask & (std::size_t{1} << v)) s.insert(v);
        out.push_back(s);
    }
    return out;
}

}  // namespace

TEST_CASE("hereditary sets") {
    auto g = catalog_get("toeplitz");
    CHECK(is_hereditary(g, parse_vertex_set(g, "w2")).holds);
    auto bad = is_hereditary(g, parse_vertex_set(g, "w1"));
    CHECK_FALSE(bad.holds);
    REQUIRE(bad.witness);
    CHECK(g.bundle(*bad.witness).label == "t2");
    CHECK(is_hereditary(g, {}).holds);
}

TEST_CASE("hereditary closure") {
    auto g = catalog_get("toeplitz");
    CHECK(hereditary_closure(g, parse_vertex_set(g, "w1")) == parse_vertex_set(g, "w1,w2"));
    CHECK(hereditary_closure(g, parse_vertex_set(g, "w2")) == parse_vertex_set(g, "w2"));
    CHECK(hereditary_closure(g, {}).empty());
}

TEST_CASE("saturated sets") {
    auto g = catalog_get("toeplitz");
    CHECK(is_saturated(g, parse_vertex_set(g, "w2")).holds);
    auto e = single_edge();
    auto bad = is_saturated(e, parse_vertex_set(e, "w"));
    CHECK_FALSE(bad.holds);
    REQUIRE(bad.witness);
    CHECK(e.vertex_id(*bad.witness) == "v");
    CHECK(is_saturated(g, parse_vertex_set(g, "w1,w2")).holds);
    // Infinite emitters are never forced into a saturated set.
    auto p = catalog_get("podles");
    CHECK(is_saturated(p, parse_vertex_set(p, "v2")).holds);
}

TEST_CASE("closure and heredity properties on random graphs") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        auto g = oracles::random_graph(rng, 4, 2);
        auto subsets = all_subsets(g);
        for (const auto& s : subsets) {
            auto c = hereditary_closure(g, s);
            CHECK(std::includes(c.begin(), c.end(), s.begin(), s.end()));
            CHECK(hereditary_closure(g, c) == c);
            CHECK(is_hereditary(g, c).holds);
            CHECK(c == reachable_from(g, s));
            CHECK(is_hereditary(g, s).holds == (reachable_from(g, s) == s));
            for (const auto& t : subsets)
                if (std::includes(t.begin(), t.end(), s.begin(), s.end())) {
                    auto ct = hereditary_closure(g, t);
                    CHECK(std::includes(ct.begin(), ct.end(), c.begin(), c.end()));
                }
        }
    }
}

TEST_CASE("admissibility of the catalog inclusions") {
    auto circle = catalog_get("circle");
    auto toeplitz = catalog_get("toeplitz");
    auto r = check_admissible(circle, toeplitz, parse_vertex_map(circle, toeplitz, "v=w1"));
    CHECK(r.admissible());

    auto point = catalog_get("point");
    auto podles = catalog_get("podles");
    CHECK(check_admissible(point, podles, parse_vertex_map(point, podles, "p=v1")).admissible());

    auto bad = check_admissible(point, toeplitz, parse_vertex_map(point, toeplitz, "p=w1"));
    CHECK(bad.a1_hereditary);
    CHECK(bad.a1_saturated);
    CHECK_FALSE(bad.a2_edge_condition);
    CHECK(bad.a3_emission_condition);
    CHECK_FALSE(bad.admissible());
    REQUIRE_FALSE(bad.witnesses.empty());
}

TEST_CASE("emission condition") {
    // v sends infinitely many edges into {w} and one edge outside it.
    Graph g(GraphData{"mixed", {"v", "w", "u"}, {{"a", "v", "w", ExtNat::infinity()}, {"b", "v", "u", 1}}});
    auto h = parse_vertex_set(g, "w");
    CHECK_FALSE(emission_condition(g, h).holds);
    CHECK_THROWS_AS(quotient_graph(g, h), PreconditionError);
    CHECK(emission_condition(catalog_get("podles"), parse_vertex_set(catalog_get("podles"), "v2")).holds);
}

TEST_CASE("quotient graphs") {
    auto toeplitz = catalog_get("toeplitz");
    auto q = quotient_graph(toeplitz, parse_vertex_set(toeplitz, "w2"));
    CHECK(find_isomorphism(q, catalog_get("circle")).has_value());

    auto ball = catalog_get("ball:2");
    auto q2 = quotient_graph(ball, parse_vertex_set(ball, "2"));
    CHECK(find_isomorphism(q2, catalog_get("sphere_odd:2")).has_value());

    auto cuntz = catalog_get("cuntz:2");
    CHECK(same_structure(quotient_graph(cuntz, {}), cuntz));

    CHECK_THROWS_AS(quotient_graph(toeplitz, parse_vertex_set(toeplitz, "w1")), PreconditionError);
    CHECK_THROWS_AS(quotient_graph(single_edge(), parse_vertex_set(single_edge(), "w")), PreconditionError);
}

TEST_CASE("quotient graph structure on random graphs") {
    std::mt19937_64 rng(17);
    int tested = 0;
    for (int i = 0; i < 200; ++i) {
        auto g = oracles::random_graph(rng, 5, 3);
        for (const auto& h : all_subsets(g)) {
            if (!is_hereditary(g, h) || !is_saturated(g, h) || !emission_condition(g, h)) continue;
            auto q = quotient_graph(g, h);
            ++tested;
            CHECK(q.vertex_count() == g.vertex_count() - h.size());
            for (std::size_t b = 0; b < q.bundle_count(); ++b) {
                auto dst = g.vertex(q.vertex_id(q.bundle(b).dst));
                CHECK(h.count(dst) == 0);
            }
            std::size_t expected = 0;
            for (std::size_t b = 0; b < g.bundle_count(); ++b)
                if (!h.count(g.bundle(b).dst)) ++expected;
            CHECK(q.bundle_count() == expected);
        }
    }
    CHECK(tested > 200);
}

TEST_CASE("quotient isomorphism for admissible catalog pairs") {
    struct Pair {
        std::string sub, ambient, vmap;
    };
    std::vector<Pair> pairs{{"circle", "toeplitz", "v=w1"}, {"point", "podles", "p=v1"}};
    for (int n = 1; n <= 4; ++n) pairs.push_back({"cpn:" + std::to_string(n - 1), "cpn:" + std::to_string(n), ""});
    for (int n = 1; n <= 3; ++n) pairs.push_back({"sphere_odd:" + std::to_string(n), "ball:" + std::to_string(n), ""});
    for (int n = 1; n <= 3; ++n)
        for (int m = 1; m <= 3; ++m)
            pairs.push_back({"cuntz:" + std::to_string(m), "rnm:" + std::to_string(n) + "," + std::to_string(m), "1=r0"});
    for (const auto& p : pairs) {
        CAPTURE(p.sub);
        CAPTURE(p.ambient);
        auto sub = catalog_get(p.sub);
        auto ambient = catalog_get(p.ambient);
        auto vmap = parse_vertex_map(sub, ambient, p.vmap);
        CHECK(check_admissible(sub, ambient, vmap).admissible());
        CHECK(check_quotient_iso(sub, ambient, vmap));
    }

    auto point = catalog_get("point");
    auto circle = catalog_get("circle");
    CHECK_THROWS_AS(check_quotient_iso(point, circle, parse_vertex_map(point, circle, "p=v")), PreconditionError);
}

TEST_CASE("vertex maps and inclusions") {
    auto sub = catalog_get("circle");
    auto ambient = catalog_get("toeplitz");
    CHECK_THROWS_AS(parse_vertex_map(sub, ambient, "v=zz"), std::exception);
    auto twice = catalog_get("cpn:1");
    auto target = catalog_get("cpn:2");
    CHECK_THROWS_AS(infer_inclusion(twice, target, std::vector<std::size_t>{0, 0}), PreconditionError);
    auto inc = infer_inclusion(sub, ambient, parse_vertex_map(sub, ambient, "v=w1"));
    REQUIRE(inc.bundle_map.size() == 1);
    CHECK(ambient.bundle(inc.bundle_map[0]).label == "t1");
}
