#include "pullgraph/algebra.hpp"

#include <utility>

namespace pullgraph {

Algebra::Algebra(GraphPtr g, VertexSet extra_exempt) : graph_(std::move(g)) {
    if (!graph_) throw AlgebraError("algebra needs a graph");
    const auto& gr = *graph_;
    std::size_t n = gr.vertex_count();
    exempt_.assign(n, false);
    special_.assign(n, std::nullopt);
    out_edges_.assign(n, {});
    for (auto v : extra_exempt) {
        if (v >= n) throw AlgebraError("exempt vertex out of range");
        exempt_[v] = true;
    }
    for (std::size_t v = 0; v < n; ++v) {
        auto cls = classify_vertex(gr, v);
        if (cls == VertexClass::InfiniteEmitter) {
            exempt_[v] = true;
            continue;
        }
        for (auto b : gr.out_bundles(v))
            for (std::uint64_t i = 0; i < gr.bundle(b).mult.value(); ++i) out_edges_[v].push_back({b, i});
        if (cls == VertexClass::Regular && !exempt_[v]) special_[v] = out_edges_[v].back();
    }
}

bool Algebra::compatible(const Algebra& other) const {
    return this == &other || (*graph_ == *other.graph_ && exempt_ == other.exempt_);
}

namespace {

bool is_redex(const Algebra& a, const Monomial& m) {
    if (m.alpha.edges.empty() || m.beta.edges.empty()) return false;
    const Edge& e = m.alpha.edges.back();
    if (!(e == m.beta.edges.back())) return false;
    std::size_t v = a.graph().source(e);
    return !a.exempt(v) && a.special_edge(v) == e;
}

void accumulate(Terms& out, const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = out.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) out.erase(it);
    }
}

void check_monomial(const Graph& g, const Monomial& m) {
    if (!g.is_valid(m.alpha) || !g.is_valid(m.beta)) throw AlgebraError("monomial uses a path that is not in the graph");
    if (g.range(m.alpha) != g.range(m.beta)) throw AlgebraError("monomial paths have different ranges");
}

}  // namespace

bool is_normal(const Algebra& algebra, const Monomial& m) { return !is_redex(algebra, m); }

Terms normalize_terms(const Algebra& algebra, Terms terms, std::mt19937_64* shuffle) {
    std::vector<std::pair<Monomial, Rational>> work(terms.begin(), terms.end());
    Terms out;
    while (!work.empty()) {
        if (shuffle) {
            std::uniform_int_distribution<std::size_t> pick(0, work.size() - 1);
            std::swap(work[pick(*shuffle)], work.back());
        }
        auto [m, c] = std::move(work.back());
        work.pop_back();
        if (c == 0) continue;
        if (!is_redex(algebra, m)) {
            accumulate(out, m, c);
            continue;
        }
        Edge special = m.alpha.edges.back();
        Monomial stripped = m;
        stripped.alpha.edges.pop_back();
        stripped.beta.edges.pop_back();
        for (const auto& e : algebra.out_edges(algebra.graph().source(special))) {
            if (e == special) continue;
            Monomial other = stripped;
            other.alpha.edges.push_back(e);
            other.beta.edges.push_back(e);
            work.emplace_back(std::move(other), -c);
        }
        work.emplace_back(std::move(stripped), c);
    }
    return out;
}

AlgebraElement::AlgebraElement(AlgebraPtr algebra) : algebra_(std::move(algebra)) {
    if (!algebra_) throw AlgebraError("element needs an algebra");
}

AlgebraElement::AlgebraElement(AlgebraPtr algebra, Terms terms) : AlgebraElement(std::move(algebra)) {
    for (const auto& [m, c] : terms) check_monomial(algebra_->graph(), m);
    terms_ = normalize_terms(*algebra_, std::move(terms));
}

AlgebraElement AlgebraElement::vertex(AlgebraPtr a, std::size_t v) {
    if (v >= a->graph().vertex_count()) throw AlgebraError("vertex out of range");
    return monomial(std::move(a), Path::vertex(v), Path::vertex(v));
}

AlgebraElement AlgebraElement::edge(AlgebraPtr a, const Path& p) {
    auto r = a->graph().range(p);
    return monomial(std::move(a), p, Path::vertex(r));
}

AlgebraElement AlgebraElement::edge_star(AlgebraPtr a, const Path& p) {
    auto r = a->graph().range(p);
    return monomial(std::move(a), Path::vertex(r), p);
}

AlgebraElement AlgebraElement::monomial(AlgebraPtr a, const Path& alpha, const Path& beta, Rational coefficient) {
    Terms t;
    t.emplace(Monomial{alpha, beta}, std::move(coefficient));
    return AlgebraElement(std::move(a), std::move(t));
}

void AlgebraElement::check_same(const AlgebraElement& other) const {
    if (!algebra_->compatible(*other.algebra_)) throw AlgebraError("elements belong to different algebras");
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
    check_same(other);
    for (const auto& [m, c] : other.terms_) accumulate(terms_, m, c);
    return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
    check_same(other);
    for (const auto& [m, c] : other.terms_) accumulate(terms_, m, -c);
    return *this;
}

AlgebraElement& AlgebraElement::operator*=(const Rational& scalar) {
    if (scalar == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_) c *= scalar;
    return *this;
}

bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
    a.check_same(b);
    return a.terms_ == b.terms_;
}

std::optional<Monomial> multiply_monomials(const Graph& g, const Monomial& a, const Monomial& b) {
    const Path& beta = a.beta;
    const Path& gamma = b.alpha;
    switch (prolongation_compare(beta, gamma)) {
        case PrefixRelation::Equal:
            return Monomial{a.alpha, b.beta};
        case PrefixRelation::APrefixOfB: {
            Path tail{g.range(beta), {gamma.edges.begin() + static_cast<std::ptrdiff_t>(beta.length()), gamma.edges.end()}};
            return Monomial{concat(g, a.alpha, tail), b.beta};
        }
        case PrefixRelation::BPrefixOfA: {
            Path tail{g.range(gamma), {beta.edges.begin() + static_cast<std::ptrdiff_t>(gamma.length()), beta.edges.end()}};
            return Monomial{a.alpha, concat(g, b.beta, tail)};
        }
        case PrefixRelation::Incomparable:
            break;
    }
    return std::nullopt;
}

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) {
    if (!a.algebra().compatible(b.algebra())) throw AlgebraError("elements belong to different algebras");
    const Graph& g = a.algebra().graph();
    Terms t;
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms())
            if (auto m = multiply_monomials(g, ma, mb)) accumulate(t, *m, ca * cb);
    return AlgebraElement(a.algebra_ptr(), std::move(t));
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) { return multiply(a, b); }

AlgebraElement star(const AlgebraElement& a) {
    Terms t;
    for (const auto& [m, c] : a.terms()) t.emplace(Monomial{m.beta, m.alpha}, c);
    return AlgebraElement(a.algebra_ptr(), std::move(t));
}

AlgebraElement normalize(const AlgebraElement& a) { return AlgebraElement(a.algebra_ptr(), a.terms()); }

std::string to_string(const Graph& g, const Monomial& m) {
    if (m.alpha.is_vertex() && m.beta.is_vertex()) return "P(" + g.vertex_id(m.alpha.base) + ")";
    std::string out;
    if (!m.alpha.is_vertex()) out += "S(" + to_string(g, m.alpha) + ")";
    if (!m.beta.is_vertex()) out += "S*(" + to_string(g, m.beta) + ")";
    return out;
}

std::string to_string(const AlgebraElement& a) {
    if (a.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : a.terms()) {
        bool negative = sgn(c) < 0;
        if (first)
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        first = false;
        Rational mag = abs(c);
        if (mag != 1) out += mag.get_str() + "*";
        out += to_string(a.algebra().graph(), m);
    }
    return out;
}

HomDescriptor::HomDescriptor(std::string name, std::variant<GraphFunctor, GeneratorMap> rule, AlgebraPtr domain,
                             AlgebraPtr codomain)
    : name_(std::move(name)), rule_(std::move(rule)), domain_(std::move(domain)), codomain_(std::move(codomain)) {
    if (!domain_ || !codomain_) throw AlgebraError("homomorphism needs a domain and a codomain");
}

HomDescriptor HomDescriptor::induced(std::string name, GraphFunctor f, AlgebraPtr domain, AlgebraPtr codomain) {
    if (!(domain->graph() == f.source()) || !(codomain->graph() == f.target()))
        throw AlgebraError("functor '" + f.name() + "' does not match the algebras of '" + name + "'");
    return HomDescriptor(std::move(name), std::move(f), std::move(domain), std::move(codomain));
}

HomDescriptor HomDescriptor::induced(std::string name, GraphFunctor f) {
    auto domain = make_algebra(f.source_ptr());
    auto codomain = make_algebra(f.target_ptr());
    return induced(std::move(name), std::move(f), std::move(domain), std::move(codomain));
}

HomDescriptor HomDescriptor::generator_map(std::string name, GeneratorMap map, AlgebraPtr domain, AlgebraPtr codomain) {
    const auto& d = domain->graph();
    const auto& c = codomain->graph();
    if (map.vertices.size() != d.vertex_count() || map.bundles.size() != d.bundle_count())
        throw AlgebraError("generator map of '" + name + "' is not total");
    for (std::size_t b = 0; b < d.bundle_count(); ++b) {
        if (!map.bundles[b]) continue;
        const auto& src = d.bundle(b);
        const auto& dst = c.bundle(*map.bundles[b]);
        if (map.vertices[src.src] != dst.src || map.vertices[src.dst] != dst.dst || !(src.mult <= dst.mult))
            throw AlgebraError("generator map of '" + name + "' sends bundle '" + src.label + "' to an incompatible bundle");
    }
    return HomDescriptor(std::move(name), std::move(map), std::move(domain), std::move(codomain));
}

std::optional<Path> HomDescriptor::map_path(const Path& p) const {
    if (const auto* f = functor()) return f->eval(p);
    const auto& map = std::get<GeneratorMap>(rule_);
    const auto& g = domain_->graph();
    auto base = map.vertices.at(p.base);
    if (!base) return std::nullopt;
    Path out{*base, {}};
    for (const auto& e : p.edges) {
        auto b = map.bundles.at(e.bundle);
        if (!b || !map.vertices.at(g.range(e))) return std::nullopt;
        out.edges.push_back({*b, e.index});
    }
    return out;
}

std::optional<Monomial> HomDescriptor::map_monomial(const Monomial& m) const {
    auto a = map_path(m.alpha);
    if (!a) return std::nullopt;
    auto b = map_path(m.beta);
    if (!b) return std::nullopt;
    return Monomial{std::move(*a), std::move(*b)};
}

AlgebraElement HomDescriptor::apply(const AlgebraElement& a) const {
    if (!a.algebra().compatible(*domain_)) throw AlgebraError("'" + name_ + "' applied outside its domain");
    Terms t;
    for (const auto& [m, c] : a.terms())
        if (auto image = map_monomial(m)) accumulate(t, *image, c);
    return AlgebraElement(codomain_, std::move(t));
}

AlgebraElement apply_hom(const HomDescriptor& h, const AlgebraElement& a) { return h.apply(a); }

HomDescriptor quotient_hom(std::string name, AlgebraPtr domain, AlgebraPtr codomain) {
    const auto& d = domain->graph();
    const auto& c = codomain->graph();
    HomDescriptor::GeneratorMap map;
    for (std::size_t v = 0; v < d.vertex_count(); ++v) map.vertices.push_back(c.find_vertex(d.vertex_id(v)));
    for (std::size_t b = 0; b < d.bundle_count(); ++b) map.bundles.push_back(c.find_bundle(d.bundle(b).label));
    return HomDescriptor::generator_map(std::move(name), std::move(map), std::move(domain), std::move(codomain));
}

HomDescriptor quotient_hom_onto(std::string name, AlgebraPtr domain, AlgebraPtr sub,
                                const std::vector<std::size_t>& vertex_map, const std::vector<std::size_t>& bundle_map) {
    const auto& d = domain->graph();
    const auto& s = sub->graph();
    if (vertex_map.size() != s.vertex_count() || bundle_map.size() != s.bundle_count())
        throw AlgebraError("inclusion for '" + name + "' is not total");
    HomDescriptor::GeneratorMap map;
    map.vertices.resize(d.vertex_count());
    map.bundles.resize(d.bundle_count());
    for (std::size_t v = 0; v < vertex_map.size(); ++v) map.vertices.at(vertex_map[v]) = v;
    for (std::size_t b = 0; b < bundle_map.size(); ++b) map.bundles.at(bundle_map[b]) = b;
    return HomDescriptor::generator_map(std::move(name), std::move(map), std::move(domain), std::move(sub));
}

namespace {

std::vector<Edge> bounded_edges(const Graph& g, std::size_t b, std::uint64_t max_index) {
    std::vector<Edge> out;
    for (std::uint64_t i = 0; i <= max_index && g.bundle(b).mult.admits_index(i); ++i) out.push_back({b, i});
    return out;
}

std::vector<Edge> bounded_edges(const Graph& g, std::uint64_t max_index) {
    std::vector<Edge> out;
    for (std::size_t b = 0; b < g.bundle_count(); ++b) {
        auto some = bounded_edges(g, b, max_index);
        out.insert(out.end(), some.begin(), some.end());
    }
    return out;
}

Path edge_path(const Graph& g, const Edge& e) { return Path{g.source(e), {e}}; }

}  // namespace

RelationsReport check_relations_preserved(const HomDescriptor& h, std::uint64_t max_index) {
    RelationsReport r;
    auto dom = h.domain();
    const auto& g = dom->graph();
    auto P = [&](std::size_t v) { return h.apply(AlgebraElement::vertex(dom, v)); };
    auto S = [&](const Edge& e) {
        if (const auto* f = h.functor()) return AlgebraElement::edge(h.codomain(), f->eval(e));
        return h.apply(AlgebraElement::edge(dom, edge_path(g, e)));
    };
    AlgebraElement zero(h.codomain());

    std::vector<AlgebraElement> projections;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) projections.push_back(P(v));
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        ++r.checks;
        if (!(star(projections[v]) == projections[v]) || !(projections[v] * projections[v] == projections[v])) {
            r.orthogonal_projections = false;
            r.witnesses.push_back("image of P(" + g.vertex_id(v) + ") is not a projection");
        }
        for (std::size_t w = v + 1; w < g.vertex_count(); ++w) {
            ++r.checks;
            if (!(projections[v] * projections[w]).is_zero()) {
                r.orthogonal_projections = false;
                r.witnesses.push_back("images of P(" + g.vertex_id(v) + ") and P(" + g.vertex_id(w) + ") are not orthogonal");
            }
        }
    }

    auto edges = bounded_edges(g, max_index);
    std::vector<AlgebraElement> images;
    for (const auto& e : edges) images.push_back(S(e));
    for (std::size_t i = 0; i < edges.size(); ++i) {
        for (std::size_t j = 0; j < edges.size(); ++j) {
            ++r.checks;
            auto lhs = star(images[i]) * images[j];
            auto rhs = i == j ? projections[g.range(edges[i])] : zero;
            if (!(lhs == rhs)) {
                r.edge_relation = false;
                r.witnesses.push_back("S*(" + to_string(g, edges[i]) + ")S(" + to_string(g, edges[j]) +
                                      ") is not preserved: image is " + to_string(lhs));
            }
        }
        ++r.checks;
        auto range_proj = images[i] * star(images[i]);
        if (!(projections[g.source(edges[i])] * range_proj == range_proj)) {
            r.range_bound = false;
            r.witnesses.push_back("range of S(" + to_string(g, edges[i]) + ") is not under P(" +
                                  g.vertex_id(g.source(edges[i])) + ")");
        }
    }

    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        if (dom->exempt(v) || classify_vertex(g, v) != VertexClass::Regular) continue;
        ++r.checks;
        AlgebraElement sum(h.codomain());
        for (const auto& e : dom->out_edges(v)) {
            auto s = S(e);
            sum += s * star(s);
        }
        if (!(sum == projections[v])) {
            r.sum_relation = false;
            r.witnesses.push_back("sum relation at '" + g.vertex_id(v) + "' is not preserved");
        }
    }
    return r;
}

CommutesReport commutes(const HomDescriptor& left, const HomDescriptor& right, const HomDescriptor& bottom_left,
                        const HomDescriptor& bottom_right, std::uint64_t max_index) {
    CommutesReport r;
    auto top = left.domain();
    if (!top->compatible(*right.domain())) throw AlgebraError("square has two different corners at the top");
    if (!bottom_left.codomain()->compatible(*bottom_right.codomain()))
        throw AlgebraError("square has two different corners at the bottom");
    const auto& g = top->graph();
    auto compare = [&](const AlgebraElement& x, const std::string& what) {
        ++r.generators_checked;
        auto via_right = bottom_right.apply(right.apply(x));
        auto via_left = bottom_left.apply(left.apply(x));
        if (!(via_right.terms() == via_left.terms())) {
            r.commutes = false;
            r.witnesses.push_back(what + ": " + to_string(via_right) + " vs " + to_string(via_left));
        }
    };
    for (std::size_t v = 0; v < g.vertex_count(); ++v) compare(AlgebraElement::vertex(top, v), "P(" + g.vertex_id(v) + ")");
    for (const auto& e : bounded_edges(g, max_index))
        compare(AlgebraElement::edge(top, edge_path(g, e)), "S(" + to_string(g, e) + ")");
    return r;
}

std::optional<Monomial> kernel_preimage(const GraphFunctor& f, const VertexSet& kept, const Monomial& m) {
    const auto& t = f.target();
    if (kept.contains(t.range(m.alpha)))
        throw AlgebraError("monomial " + to_string(t, m) + " is not in the kernel: its range is kept");
    auto a = f.decode(m.alpha);
    if (!a) return std::nullopt;
    auto b = f.decode(m.beta);
    if (!b) return std::nullopt;
    if (f.source().range(*a) != f.source().range(*b)) return std::nullopt;
    return Monomial{std::move(*a), std::move(*b)};
}

}  // namespace pullgraph
