#include "doctest.h"
#include "pullgraph/catalog.hpp"
#include "pullgraph/functor.hpp"
#include "pullgraph/resolution.hpp"

using namespace pullgraph;

namespace {

GraphPtr lookup(const std::string& name) { return share(catalog_get(name)); }

}  // namespace

TEST_CASE("explicit templates evaluate and decode") {
    const char* text =
        "functor f: podles -> toeplitz\n"
        "vertex v1 -> w1\n"
        "vertex v2 -> w2\n"
        "map e[k] -> t1^k t2[0]\n";
    auto f = parse_functor(text, lookup);
    CHECK(f.validate(5).empty());
    const auto& src = f.source();
    const auto& tgt = f.target();
    CHECK(to_string(tgt, f.eval(Edge{0, 0})) == "t2");
    CHECK(to_string(tgt, f.eval(Edge{0, 2})) == "t1.t1.t2");
    auto back = f.decode(parse_path(tgt, "t1.t2"));
    REQUIRE(back);
    CHECK(to_string(src, *back) == "e[1]");
    CHECK_FALSE(f.decode(parse_path(tgt, "t1")));

    auto again = parse_functor(serialize_functor(f), lookup);
    CHECK(again == f);

    auto report = check_functor_conditions(f, 4, 3);
    CHECK(report.reflects_prolongation);
    CHECK(report.regular_bijection);
}

TEST_CASE("functor file errors") {
    CHECK_THROWS(parse_functor("functor f: podles -> toeplitz\nmap e[k] -> t2^k\n", lookup));
    CHECK_THROWS(parse_functor("functor f: podles -> toeplitz\nvertex v1 -> w1\nvertex v2 -> w2\nmap zz[k] -> t2\n", lookup));
    CHECK_THROWS(parse_functor("bogus line\n", lookup));
}

TEST_CASE("invalid edge images are reported") {
    const char* text =
        "functor bad: podles -> toeplitz\n"
        "vertex v1 -> w1\n"
        "vertex v2 -> w2\n"
        "map e[k] -> t1\n";
    auto f = parse_functor(text, lookup);
    CHECK_FALSE(f.validate(2).empty());
}

TEST_CASE("identity functor satisfies both conditions") {
    for (const char* spec : {"toeplitz", "cuntz:2", "podles", "ball:2", "enm:1,1"}) {
        auto f = GraphFunctor::identity(share(catalog_get(spec)));
        auto report = check_functor_conditions(f, 4, 2);
        CHECK(report.reflects_prolongation);
        CHECK(report.regular_bijection);
        for (const auto& p : enumerate_all_paths(f.source(), 3, 2)) {
            CHECK(f.eval(p) == p);
            CHECK(f.decode(p) == p);
        }
    }
}

TEST_CASE("collapsing two edges violates prolongation reflection") {
    auto source = share(Graph(GraphData{"two", {"a", "b"}, {{"e", "a", "b", 2}}}));
    auto target = share(Graph(GraphData{"one", {"a", "b"}, {{"t", "a", "b", 1}}}));
    std::vector<EdgeRule> rules{ExplicitTemplate{{Factor{0, Factor::Kind::Fixed, 0}}}};
    GraphFunctor f("collapse", source, target, {0, 1}, rules);
    CHECK(f.validate(3).empty());
    auto report = check_functor_conditions(f, 3, 3);
    CHECK_FALSE(report.reflects_prolongation);
    CHECK_FALSE(report.regular_bijection);
    CHECK_FALSE(report.witnesses.empty());
}

TEST_CASE("canonical resolution functor on the Toeplitz graph") {
    auto r = resolve(share(catalog_get("toeplitz")), parse_vertex_set(catalog_get("toeplitz"), "w1"));
    const auto& f = r.functor;
    const auto& e1 = *r.e1;
    const auto& e2 = *r.e2;
    std::size_t b = e1.bundle_index("t2");
    CHECK(to_string(e2, f.eval(Edge{b, 0})) == "t2");
    CHECK(to_string(e2, f.eval(Edge{b, 1})) == "t1.t2");
    CHECK(to_string(e2, f.eval(Edge{b, 2})) == "t1.t1.t2");
    auto d = f.decode(parse_path(e2, "t2"));
    REQUIRE(d);
    CHECK(*d == Path{e1.vertex("w1"), {Edge{b, 0}}});
    CHECK_FALSE(f.decode(parse_path(e2, "t1")));
    CHECK(rule_to_string(e2, f.rule(b)) == "canonical t2");

    auto report = check_functor_conditions(f, 4, 3);
    CHECK(report.reflects_prolongation);
    CHECK(report.regular_bijection);
}

TEST_CASE("restriction to subgraphs") {
    auto r = resolve(share(catalog_get("ball:2")), parse_vertex_set(catalog_get("ball:2"), "0,1"));
    const auto& g = r.restricted;
    CHECK(g.source() == *r.f1);
    CHECK(g.target() == *r.f2);
    CHECK(g.validate(3).empty());
    for (const auto& p : enumerate_all_paths(*r.f1, 3, 2)) {
        auto img = g.eval(p);
        CHECK(to_string(*r.f2, img) == to_string(*r.e2, r.functor.eval(parse_path(*r.e1, to_string(*r.f1, p)))));
    }
}

TEST_CASE("overrides replace single edge images") {
    auto r = resolve(share(catalog_get("toeplitz")), parse_vertex_set(catalog_get("toeplitz"), "w1"));
    auto f = r.functor;
    std::size_t b = r.e1->bundle_index("t2");
    f.set_override(Edge{b, 3}, parse_path(*r.e2, "t2"));
    CHECK(to_string(*r.e2, f.eval(Edge{b, 3})) == "t2");
    CHECK_FALSE(check_functor_conditions(f, 3, 4).reflects_prolongation);
}
