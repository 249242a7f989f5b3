#include <functional>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pullgraph/catalog.hpp"
#include "pullgraph/pushout.hpp"

using namespace pullgraph;

namespace {

GraphPtr g_of(const std::string& spec) { return share(catalog_get(spec)); }

PullbackCertificate base_cert(const std::string& spec, const std::string& f2) {
    auto g = g_of(spec);
    return verify_pullback(g, parse_vertex_set(*g, f2), Bounds{4, 3});
}

std::string prefix_of(const std::string& label) { return label.substr(0, 2); }

// Bundle label sequences of all simple directed cycles.
std::vector<std::vector<std::string>> simple_cycles(const Graph& g) {
    std::vector<std::vector<std::string>> out;
    std::vector<std::string> labels;
    std::vector<bool> on_path(g.vertex_count(), false);
    std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t start, std::size_t v) {
        for (auto b : g.out_bundles(v)) {
            auto w = g.bundle(b).dst;
            if (w < start) continue;
            labels.push_back(g.bundle(b).label);
            if (w == start)
                out.push_back(labels);
            else if (!on_path[w]) {
                on_path[w] = true;
                dfs(start, w);
                on_path[w] = false;
            }
            labels.pop_back();
        }
    };
    for (std::size_t s = 0; s < g.vertex_count(); ++s) {
        on_path[s] = true;
        dfs(s, s);
        on_path[s] = false;
    }
    return out;
}

}  // namespace

TEST_CASE("gluing the teardrop graph to a chain") {
    auto wn = g_of("wn:2");
    auto h = g_of("h_chain:2");
    auto d = parse_attachment(wn, h, "r1=r1,r2=r2");
    auto glued = pushout_over_sinks(d);
    CHECK(glued.vertex_count() == wn->vertex_count() + h->vertex_count() - 2);
    CHECK(glued.bundle_count() == wn->bundle_count() + h->bundle_count());
    CHECK(glued.find_bundle("E:f1").has_value());
    CHECK(glued.find_bundle("H:h2").has_value());
    CHECK(glued.bundle(glued.bundle_index("H:h1")).src == glued.vertex("r1"));
    CHECK(glued.find_vertex("H:h").has_value());
    CHECK(same_structure(glued, catalog_get("gn:2")));
}

TEST_CASE("empty attachment is a disjoint union") {
    auto e = g_of("toeplitz");
    auto h = g_of("cuntz:2");
    auto glued = pushout_over_sinks(parse_attachment(e, h, ""));
    CHECK(glued.vertex_count() == 3);
    CHECK(glued.bundle_count() == 3);
}

TEST_CASE("gluing requires sinks on one side and injective maps") {
    auto wn = g_of("wn:2");
    auto h = g_of("h_chain:2");
    CHECK_THROWS_AS(pushout_over_sinks(parse_attachment(wn, h, "r0=r1")), PreconditionError);
    CHECK_THROWS_AS(parse_attachment(wn, h, "r1=r1,r2=r1"), PreconditionError);
    CHECK_THROWS_AS(parse_attachment(wn, h, "zz=r1"), PreconditionError);
    CHECK_THROWS_AS(parse_attachment(wn, h, "r1=zz"), PreconditionError);
    // Sinks of H suffice even when E's vertex is not a sink.
    CHECK_NOTHROW(pushout_over_sinks(parse_attachment(wn, h, "r0=h")));
}

TEST_CASE("pushout is symmetric and counts add up on random graphs") {
    std::mt19937_64 rng(77);
    int glued = 0;
    for (int i = 0; i < 200; ++i) {
        auto e = share(oracles::random_graph(rng, 4, 2));
        auto h = share(oracles::random_graph(rng, 4, 2));
        std::vector<std::size_t> sinks;
        for (std::size_t v = 0; v < e->vertex_count(); ++v)
            if (classify_vertex(*e, v) == VertexClass::Sink) sinks.push_back(v);
        std::shuffle(sinks.begin(), sinks.end(), rng);
        std::vector<std::size_t> h_vertices(h->vertex_count());
        for (std::size_t v = 0; v < h_vertices.size(); ++v) h_vertices[v] = v;
        std::shuffle(h_vertices.begin(), h_vertices.end(), rng);
        std::size_t k = std::min(sinks.size(), h_vertices.size());
        std::string spec, reversed;
        for (std::size_t j = 0; j < k; ++j) {
            spec += (j ? "," : "") + e->vertex_id(sinks[j]) + "=" + h->vertex_id(h_vertices[j]);
            reversed += (j ? "," : "") + h->vertex_id(h_vertices[j]) + "=" + e->vertex_id(sinks[j]);
        }
        auto forward = pushout_over_sinks(parse_attachment(e, h, spec));
        auto backward = pushout_over_sinks(parse_attachment(h, e, reversed));
        CHECK(forward.vertex_count() == e->vertex_count() + h->vertex_count() - k);
        CHECK(forward.bundle_count() == e->bundle_count() + h->bundle_count());
        CHECK(find_isomorphism(forward, backward).has_value());
        ++glued;
    }
    CHECK(glued == 200);
}

TEST_CASE("cycles of glued graphs stay on one side") {
    std::vector<Graph> graphs{catalog_get("gn:2"), catalog_get("enm:2,2"), catalog_get("enm:1,2,3")};
    auto e = g_of("rnm:2,2");
    auto cyc = g_of("h_cycle:2");
    graphs.push_back(pushout_over_sinks(parse_attachment(e, cyc, "r1=r1,r2=r2")));
    auto cuntz_side = g_of("cuntz:2");
    graphs.push_back(pushout_over_sinks(parse_attachment(g_of("toeplitz"), cuntz_side, "w2=1")));
    std::size_t found = 0;
    for (const auto& g : graphs) {
        auto cycles = simple_cycles(g);
        found += cycles.size();
        for (const auto& c : cycles)
            for (const auto& label : c) CHECK(prefix_of(label) == prefix_of(c.front()));
    }
    CHECK(found > 0);
}

TEST_CASE("extended functor acts as the base on E and as the identity on H") {
    auto base = base_cert("toeplitz", "w1");
    REQUIRE(base.verified());
    auto h = share(Graph(GraphData{"tail", {"x", "y"}, {{"s", "x", "y", 1}, {"l", "y", "y", 1}}}));
    auto ext = verify_extension(base, h, "w2=x", Bounds{4, 3});
    REQUIRE(ext.psi);
    const auto& psi = *ext.psi;
    const auto& g1 = *ext.glued1;
    const auto& g2 = *ext.glued2;
    std::size_t t2 = g1.bundle_index("E:t2");
    CHECK(to_string(g2, psi.eval(Edge{t2, 0})) == "E:t2");
    CHECK(to_string(g2, psi.eval(Edge{t2, 2})) == "E:t1.E:t1.E:t2");
    for (const char* label : {"H:s", "H:l"}) {
        std::size_t b = g1.bundle_index(label);
        CHECK(to_string(g2, psi.eval(Edge{b, 0})) == label);
    }
    const auto& f = base.resolution->functor;
    for (const auto& p : enumerate_all_paths(*base.resolution->e1, 3, 3)) {
        if (p.is_vertex()) continue;
        auto img = f.eval(p);
        std::string text;
        for (std::size_t i = 0; i < p.edges.size(); ++i) {
            const auto& b = base.resolution->e1->bundle(p.edges[i].bundle);
            text += (i ? "." : "") + glued_label_e(b.label) + "[" + std::to_string(p.edges[i].index) + "]";
        }
        auto glued_path = parse_path(g1, text);
        std::string expect;
        for (std::size_t i = 0; i < img.edges.size(); ++i)
            expect += (i ? "." : "") + glued_label_e(base.resolution->e2->bundle(img.edges[i].bundle).label);
        CHECK(to_string(g2, psi.eval(glued_path)) == expect);
    }
    CHECK(ext.verified());
}

TEST_CASE("identity base functors extend to identities") {
    auto e = g_of("cpn:2");
    auto cert = verify_pullback(e, parse_vertex_set(*e, "0,1"), Bounds{4, 3});
    REQUIRE(cert.verified());
    auto h = g_of("h_chain:1");
    auto ext = verify_extension(cert, h, "2=r1", Bounds{4, 3});
    REQUIRE(ext.psi);
    for (const auto& p : enumerate_all_paths(*ext.glued1, 3, 2))
        CHECK(to_string(*ext.glued2, ext.psi->eval(p)) == to_string(*ext.glued1, p));
    CHECK(ext.verified());
}

TEST_CASE("extension of the sink-extended Cuntz resolution") {
    auto base = base_cert("rnm:2,2", "r0");
    REQUIRE(base.verified());
    auto ext = verify_extension(base, g_of("h_chain:2"), "r1=r1,r2=r2", Bounds{4, 3});
    CHECK(ext.verified());
    CHECK(ext.corners.size() == 4);
    std::vector<std::string> names;
    for (const auto& [name, value] : ext.checks.entries()) names.push_back(name);
    CHECK(names == extension_check_names());
    CHECK(find_isomorphism(*ext.glued1, catalog_get("gn:2")).has_value());
    CHECK(find_isomorphism(*ext.glued2, catalog_get("enm:2,2")).has_value());

    auto report = kernel_descriptor_check(base, ext, Bounds{3, 2});
    CHECK(report.agrees);
    CHECK(report.in_kernel > 0);
    CHECK(report.in_kernel < report.monomials_checked);

    auto delta = extended_quotient(ext.glued1, base.resolution->f1, "delta");
    auto a = delta.domain();
    const auto& g = a->graph();
    CHECK_FALSE(apply_hom(delta, AlgebraElement::vertex(a, g.vertex("r0"))).is_zero());
    auto via_h = parse_path(g, "H:h2");
    CHECK(apply_hom(delta, AlgebraElement::monomial(a, via_h, via_h)).is_zero());
    auto e0 = parse_path(g, "E:f1[0]");
    CHECK(apply_hom(delta, AlgebraElement::monomial(a, e0, e0)).is_zero());
}

TEST_CASE("bad attachments fail with witnesses") {
    auto base = base_cert("rnm:2,2", "r0");
    auto ext = verify_extension(base, g_of("h_chain:2"), "r0=r1", Bounds{4, 3});
    CHECK_FALSE(ext.verified());
    CHECK_FALSE(ext.checks.get("iota_e1_into_sinks"));
    CHECK_FALSE(ext.checks.get("delta_annihilates_x"));
    bool tagged = false;
    for (const auto& w : ext.witnesses)
        if (w.rfind("(a)", 0) == 0) tagged = true;
    CHECK(tagged);
    CHECK_THROWS_AS(verify_extension(base, g_of("h_chain:2"), "zz=r1", Bounds{4, 3}), PreconditionError);
}
