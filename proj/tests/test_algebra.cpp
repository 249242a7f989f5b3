#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pullgraph/algebra.hpp"
#include "pullgraph/catalog.hpp"
#include "pullgraph/expression.hpp"
#include "pullgraph/oracle.hpp"
#include "pullgraph/resolution.hpp"

using namespace pullgraph;

namespace {

AlgebraPtr algebra_of(const std::string& spec) { return make_algebra(share(catalog_get(spec))); }

AlgebraElement expr(const AlgebraPtr& a, const std::string& text) { return parse_expression(a, text); }

std::string show(const AlgebraElement& x) { return to_string(x); }

using Matrix = std::map<std::pair<std::size_t, std::size_t>, Rational>;

Matrix mat_mul(const Matrix& a, const Matrix& b) {
    Matrix out;
    for (const auto& [ij, x] : a)
        for (const auto& [jk, y] : b)
            if (ij.second == jk.first) out[{ij.first, jk.second}] += x * y;
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

Matrix mat_add(Matrix a, const Matrix& b) {
    for (const auto& [k, v] : b) a[k] += v;
    for (auto it = a.begin(); it != a.end();) it = it->second == 0 ? a.erase(it) : std::next(it);
    return a;
}

// Unnormalized sums of products of random monomials.
Terms random_raw_terms(std::mt19937_64& rng, const Algebra& a, const std::vector<Path>& paths) {
    Terms out;
    auto x = oracles::random_element(rng, std::make_shared<const Algebra>(a), paths, 2);
    auto y = oracles::random_element(rng, std::make_shared<const Algebra>(a), paths, 2);
    for (const auto& [m1, c1] : x.terms())
        for (const auto& [m2, c2] : y.terms())
            if (auto m = multiply_monomials(a.graph(), m1, m2)) out[*m] += c1 * c2;
    // Expand S_a S_b^* into non-normal pieces as well.
    for (const auto& [m, c] : x.terms()) {
        auto v = a.graph().range(m.alpha);
        for (const auto& e : a.out_edges(v)) {
            Monomial longer{m.alpha, m.beta};
            longer.alpha.edges.push_back(e);
            longer.beta.edges.push_back(e);
            out[longer] += c;
        }
    }
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

const std::vector<std::string> kPropertyGraphs{"toeplitz", "podles", "cuntz:2", "rp2q", "eq_sphere", "ball:2",
                                               "cpn:2",    "wn:2",   "rnm:2,2", "enm:1,2", "h_cycle:2"};

}  // namespace

TEST_CASE("multiplication examples") {
    auto t = algebra_of("toeplitz");
    CHECK((expr(t, "S*(t2)") * expr(t, "S(t1)")).is_zero());
    CHECK(expr(t, "S*(t2) S(t2)") == expr(t, "P(w2)"));
    CHECK(expr(t, "S*(t1) S(t1)") == expr(t, "P(w1)"));
    auto m = expr(t, "S(t1.t2)S*(t2)");
    CHECK(expr(t, "P(w1)") * m == m);
    CHECK(expr(t, "P(w2)") * m == AlgebraElement(t));

    auto other = algebra_of("podles");
    CHECK_THROWS_AS(expr(t, "P(w1)") * AlgebraElement::vertex(other, 0), AlgebraError);
}

TEST_CASE("star") {
    auto t = algebra_of("toeplitz");
    auto g = t->graph_ptr();
    auto a = parse_path(*g, "t1.t2");
    auto b = parse_path(*g, "t2");
    CHECK(star(AlgebraElement::monomial(t, a, b)) == AlgebraElement::monomial(t, b, a));
    CHECK(star(expr(t, "P(w1)")) == expr(t, "P(w1)"));
}

TEST_CASE("normal form examples") {
    auto t = algebra_of("toeplitz");
    CHECK(show(expr(t, "S(t2)S*(t2)")) == "P(w1) - S(t1)S*(t1)");
    auto p = algebra_of("podles");
    auto v1 = AlgebraElement::vertex(p, p->graph().vertex("v1"));
    CHECK(v1.terms().size() == 1);
    CHECK(show(v1) == "P(v1)");
    CHECK(show(AlgebraElement(t)) == "0");
    CHECK(show(expr(t, "3/2*S(t1) - 1/2*P(w1)")) == "-1/2*P(w1) + 3/2*S(t1)");
}

TEST_CASE("expressions print and parse back") {
    std::mt19937_64 rng(1);
    for (const auto& spec : kPropertyGraphs) {
        auto a = algebra_of(spec);
        auto paths = enumerate_all_paths(a->graph(), 3, 2);
        for (int i = 0; i < 30; ++i) {
            auto x = oracles::random_element(rng, a, paths);
            CHECK(expr(a, show(x)) == x);
        }
    }
    auto t = algebra_of("toeplitz");
    CHECK_THROWS_AS(expr(t, "P(zz)"), std::exception);
    CHECK_THROWS_AS(expr(t, "S(t1"), ExpressionError);
    CHECK_THROWS_AS(expr(t, "S(t1) +"), ExpressionError);
    CHECK(expr(t, "2") == expr(t, "2*P(w1) + 2*P(w2)"));
}

TEST_CASE("associativity, involution and idempotence") {
    std::mt19937_64 rng(42);
    for (const auto& spec : kPropertyGraphs) {
        CAPTURE(spec);
        auto a = algebra_of(spec);
        auto paths = enumerate_all_paths(a->graph(), 4, 3);
        for (int i = 0; i < 200; ++i) {
            auto x = oracles::random_element(rng, a, paths);
            auto y = oracles::random_element(rng, a, paths);
            auto z = oracles::random_element(rng, a, paths);
            CHECK((x * y) * z == x * (y * z));
            CHECK(star(x * y) == star(y) * star(x));
            CHECK(star(star(x)) == x);
            CHECK(normalize(x) == x);
            CHECK(x * (y + z) == x * y + x * z);
        }
    }
}

TEST_CASE("normalization is confluent across rewrite orders") {
    std::mt19937_64 rng(7);
    for (const auto& spec : kPropertyGraphs) {
        auto a = algebra_of(spec);
        auto paths = enumerate_all_paths(a->graph(), 3, 2);
        for (int i = 0; i < 50; ++i) {
            auto raw = random_raw_terms(rng, *a, paths);
            auto reference = normalize_terms(*a, raw);
            for (const auto& [m, c] : reference) CHECK(is_normal(*a, m));
            for (int s = 0; s < 5; ++s) {
                std::mt19937_64 order(rng());
                CHECK(normalize_terms(*a, raw, &order) == reference);
            }
        }
    }
}

TEST_CASE("nonvanishing of S_a^* S_b follows prefix comparability") {
    for (const auto& spec : catalog_sample_specs()) {
        CAPTURE(spec);
        auto a = algebra_of(spec);
        auto paths = enumerate_all_paths(a->graph(), 3, 2);
        for (const auto& p : paths)
            for (const auto& q : paths) {
                bool nonzero = !(AlgebraElement::edge_star(a, p) * AlgebraElement::edge(a, q)).is_zero();
                CHECK(nonzero == (oracles::is_prefix(p, q) || oracles::is_prefix(q, p)));
            }
    }
}

TEST_CASE("range projections sit below source projections") {
    for (const auto& spec : kPropertyGraphs) {
        auto a = algebra_of(spec);
        for (const auto& p : enumerate_all_paths(a->graph(), 4, 3)) {
            auto range = AlgebraElement::monomial(a, p, p);
            CHECK(AlgebraElement::vertex(a, p.base) * range == range);
        }
    }
}

TEST_CASE("representation oracle examples") {
    auto g = share(Graph(GraphData{"edge_only", {"w1", "w2"}, {{"t2", "w1", "w2", 1}}}));
    auto a = make_algebra(g);
    auto m = faithful_rep_oracle(expr(a, "S(t2)S*(t2)"));
    CHECK(m.basis.size() == 2);
    REQUIRE(m.entries.size() == 1);
    CHECK(m.entries.begin()->second == 1);
    CHECK(m.entries.begin()->first.first == m.entries.begin()->first.second);
    CHECK(faithful_rep_oracle(AlgebraElement(a)).is_zero());
    CHECK_THROWS_AS(faithful_rep_oracle(expr(algebra_of("toeplitz"), "P(w1)")), AlgebraError);
    CHECK_THROWS_AS(faithful_rep_oracle(expr(algebra_of("podles"), "P(v1)")), AlgebraError);
}

TEST_CASE("engine equality matches the representation oracle") {
    std::mt19937_64 rng(31337);
    std::bernoulli_distribution coin(0.3);
    for (int i = 0; i < 200; ++i) {
        auto g = share(oracles::random_graph(rng, 5, 3, 0.45, false, true));
        VertexSet exempt;
        for (std::size_t v = 0; v < g->vertex_count(); ++v)
            if (coin(rng)) exempt.insert(v);
        auto a = make_algebra(g, exempt);
        auto paths = enumerate_all_paths(*g, 4, 2);
        auto x = oracles::random_element(rng, a, paths);
        auto y = oracles::random_element(rng, a, paths);
        auto mx = faithful_rep_oracle(x);
        auto my = faithful_rep_oracle(y);
        CHECK(mx.is_zero() == x.is_zero());
        CHECK((mx == my) == (x == y));
        CHECK(faithful_rep_oracle(x * y).entries == mat_mul(mx.entries, my.entries));
        CHECK(faithful_rep_oracle(x + y).entries == mat_add(mx.entries, my.entries));
        CHECK(faithful_rep_oracle(x - x).is_zero());
        // A sum of range projections over s^-1(v) equals P_v unless v is exempt.
        for (std::size_t v = 0; v < g->vertex_count(); ++v) {
            if (a->out_edges(v).empty()) continue;
            AlgebraElement sum(a);
            for (const auto& e : a->out_edges(v)) {
                Path p{v, {e}};
                sum += AlgebraElement::monomial(a, p, p);
            }
            bool equal = sum == AlgebraElement::vertex(a, v);
            CHECK(equal == !a->exempt(v));
            CHECK((faithful_rep_oracle(sum) == faithful_rep_oracle(AlgebraElement::vertex(a, v))) == equal);
        }
    }
}

TEST_CASE("induced homomorphism of the Toeplitz resolution") {
    auto toeplitz = share(catalog_get("toeplitz"));
    auto r = resolve(toeplitz, parse_vertex_set(*toeplitz, "w1"));
    auto sq = pullback_square(r);
    const auto& src = sq.f_star.domain();
    const auto& dst = sq.f_star.codomain();
    auto e1 = expr(src, "S(t2[1])");
    CHECK(show(apply_hom(sq.f_star, e1)) == "S(t1.t2)");

    auto rel = check_relations_preserved(sq.f_star, 3);
    CHECK(rel.all());
    CHECK(rel.checks > 0);

    auto square = commutes(sq.pi1, sq.f_star, sq.f_restricted_star, sq.pi2, 3);
    CHECK(square.commutes);
    CHECK(square.generators_checked > 0);

    auto id = HomDescriptor::induced("id", GraphFunctor::identity(toeplitz), dst, dst);
    std::mt19937_64 rng(4);
    auto paths = enumerate_all_paths(*toeplitz, 3, 1);
    for (int i = 0; i < 20; ++i) {
        auto x = oracles::random_element(rng, dst, paths);
        CHECK(apply_hom(id, x) == x);
    }
    CHECK_THROWS_AS(apply_hom(sq.f_star, expr(dst, "P(w1)")), AlgebraError);
}

TEST_CASE("induced maps are multiplicative") {
    std::mt19937_64 rng(12);
    for (const auto& [spec, f2] : std::vector<std::pair<std::string, std::string>>{
             {"toeplitz", "w1"}, {"ball:2", "0,1"}, {"rnm:2,2", "r0"}, {"eq_sphere", "top"}}) {
        auto g = share(catalog_get(spec));
        auto r = resolve(g, parse_vertex_set(*g, f2));
        auto sq = pullback_square(r);
        auto paths = enumerate_all_paths(*r.e1, 3, 2);
        for (int i = 0; i < 50; ++i) {
            auto x = oracles::random_element(rng, sq.f_star.domain(), paths);
            auto y = oracles::random_element(rng, sq.f_star.domain(), paths);
            CHECK(apply_hom(sq.f_star, x * y) == apply_hom(sq.f_star, x) * apply_hom(sq.f_star, y));
            CHECK(apply_hom(sq.f_star, star(x)) == star(apply_hom(sq.f_star, x)));
            CHECK(apply_hom(sq.pi1, x * y) == apply_hom(sq.pi1, x) * apply_hom(sq.pi1, y));
        }
    }
}

TEST_CASE("quotient homomorphism") {
    auto toeplitz = share(catalog_get("toeplitz"));
    auto quotient = share(quotient_graph(*toeplitz, parse_vertex_set(*toeplitz, "w2")));
    auto a = make_algebra(toeplitz);
    auto b = make_algebra(quotient);
    auto pi = quotient_hom("pi", a, b);
    CHECK(apply_hom(pi, expr(a, "S(t2)")).is_zero());
    CHECK(show(apply_hom(pi, expr(a, "S(t1)"))) == "S(t1)");
    CHECK(apply_hom(pi, expr(a, "P(w1)")) == AlgebraElement::vertex(b, 0));
    CHECK(check_relations_preserved(pi, 3).all());
}

TEST_CASE("a corrupted functor breaks the edge relation") {
    auto toeplitz = share(catalog_get("toeplitz"));
    auto r = resolve(toeplitz, parse_vertex_set(*toeplitz, "w1"));
    auto f = r.functor;
    f.set_override(Edge{r.e1->bundle_index("t2"), 0}, parse_path(*toeplitz, "t1"));
    auto h = HomDescriptor::induced("bad", f);
    auto rel = check_relations_preserved(h, 3);
    CHECK_FALSE(rel.edge_relation);
    CHECK_FALSE(rel.witnesses.empty());
}

TEST_CASE("kernel preimages") {
    auto toeplitz = share(catalog_get("toeplitz"));
    auto kept = parse_vertex_set(*toeplitz, "w1");
    auto r = resolve(toeplitz, kept);
    Monomial m{parse_path(*toeplitz, "t1.t2"), parse_path(*toeplitz, "t2")};
    auto pre = kernel_preimage(r.functor, kept, m);
    REQUIRE(pre);
    CHECK(to_string(*r.e1, *pre) == "S(t2[1])S*(t2[0])");
    Monomial vertex{parse_path(*toeplitz, "w1"), parse_path(*toeplitz, "w1")};
    CHECK_THROWS_AS(kernel_preimage(r.functor, kept, vertex), AlgebraError);
}
