#include "pullgraph/resolution.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace pullgraph {

void CheckList::set(const std::string& name, bool value) {
    for (auto& [n, v] : entries_) {
        if (n == name) {
            v = value;
            return;
        }
    }
    entries_.emplace_back(name, value);
}

bool CheckList::get(const std::string& name) const {
    for (const auto& [n, v] : entries_)
        if (n == name) return v;
    throw std::out_of_range("no check named '" + name + "'");
}

bool CheckList::contains(const std::string& name) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == name; });
}

bool CheckList::all() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const auto& e) { return e.second; });
}

namespace {

bool has_self_loop(const Graph& g, std::size_t v) {
    auto out = g.out_bundles(v);
    return std::any_of(out.begin(), out.end(), [&](std::size_t b) { return g.bundle(b).is_loop(); });
}

VertexSet vertex_set_of(const Graph& g, const Graph& sub) {
    VertexSet s;
    for (std::size_t v = 0; v < sub.vertex_count(); ++v) s.insert(g.vertex(sub.vertex_id(v)));
    return s;
}

std::vector<std::size_t> identity_map(const Graph& sub, const Graph& ambient) {
    std::vector<std::size_t> map;
    for (std::size_t v = 0; v < sub.vertex_count(); ++v) map.push_back(ambient.vertex(sub.vertex_id(v)));
    return map;
}

void check_hypotheses(const Graph& e2, const Graph& f2, const VertexSet& s) {
    auto report = check_admissible(f2, e2, identity_map(f2, e2));
    if (!report.admissible()) {
        std::string msg = "F2 is not admissible in E2:";
        for (const auto& w : report.witnesses) msg += " " + w + ";";
        throw PreconditionError(msg);
    }
    auto loops = short_loops_at(e2, complement(e2, s));
    if (!loops.empty())
        throw PreconditionError("E2 has a self-loop '" + e2.bundle(loops.front()).label + "' outside F2 at vertex '" +
                                e2.vertex_id(e2.bundle(loops.front()).src) + "'");
}

}  // namespace

ExtNat irreducible_pointed_count(const Graph& g, std::size_t v, std::size_t w) {
    if (v >= g.vertex_count() || w >= g.vertex_count()) throw GraphError("vertex index out of range");
    if (v == w) return 0;
    ExtNat m = g.multiplicity(v, w);
    if (!has_self_loop(g, v)) return m;
    return m.is_zero() ? ExtNat(0) : ExtNat::infinity();
}

ExtNat irreducible_pointed_count(const Graph& g, std::string_view v, std::string_view w) {
    return irreducible_pointed_count(g, g.vertex(v), g.vertex(w));
}

Graph subgraph_on(const Graph& g, const VertexSet& s) { return induced_subgraph(g, s, g.name() + "_sub"); }

Resolution build_resolution(GraphPtr e2, const VertexSet& f2) {
    const Graph& g = *e2;
    for (auto v : f2)
        if (v >= g.vertex_count()) throw GraphError("vertex index out of range in F2");
    GraphData d;
    d.name = g.name() + "_res";
    for (std::size_t v = 0; v < g.vertex_count(); ++v) d.vertices.push_back(g.vertex_id(v));
    for (std::size_t b = 0; b < g.bundle_count(); ++b) {
        const auto& bundle = g.bundle(b);
        if (bundle.is_loop()) continue;
        ExtNat mult = bundle.mult;
        if (has_self_loop(g, bundle.src)) {
            for (auto l : g.out_bundles(bundle.src))
                if (g.bundle(l).is_loop() && g.bundle(l).mult.is_infinite())
                    throw PreconditionError("vertex '" + g.vertex_id(bundle.src) +
                                            "' has infinitely many self-loops; irreducible pointed paths cannot be enumerated");
            if (bundle.mult.is_infinite())
                throw PreconditionError("bundle '" + bundle.label + "' is infinite and leaves a vertex with self-loops; "
                                        "irreducible pointed paths cannot be enumerated");
            mult = ExtNat::infinity();
        }
        d.bundles.push_back({bundle.label, g.vertex_id(bundle.src), g.vertex_id(bundle.dst), mult});
    }
    auto e1 = share(Graph(std::move(d)));

    std::vector<std::size_t> vmap(e1->vertex_count());
    for (std::size_t v = 0; v < vmap.size(); ++v) vmap[v] = v;
    std::vector<EdgeRule> rules;
    for (std::size_t b = 0; b < e1->bundle_count(); ++b) {
        std::size_t target = g.bundle_index(e1->bundle(b).label);
        if (has_self_loop(g, g.bundle(target).src))
            rules.emplace_back(CanonicalResolution{target});
        else
            rules.emplace_back(ExplicitTemplate{{Factor{target, Factor::Kind::SameIndex, 0}}});
    }
    GraphFunctor f("f", e1, e2, std::move(vmap), std::move(rules));

    auto f2_graph = share(subgraph_on(g, f2));
    auto f1_graph = share(subgraph_on(*e1, f2));
    GraphFunctor restricted = restrict_functor(f, f1_graph, f2_graph);
    return Resolution{std::move(e2), std::move(f2_graph), std::move(e1), std::move(f1_graph), std::move(f),
                      std::move(restricted), f2};
}

Resolution resolve(GraphPtr e2, const VertexSet& f2) {
    for (auto v : f2)
        if (v >= e2->vertex_count()) throw GraphError("vertex index out of range in F2");
    check_hypotheses(*e2, subgraph_on(*e2, f2), f2);
    return build_resolution(std::move(e2), f2);
}

const std::vector<std::string>& pullback_check_names() {
    static const std::vector<std::string> names = {
        "f2_admissible",
        "f1_admissible",
        "complement_nonempty",
        "e1_loop_free",
        "no_short_loops_outside_f2",
        "vertex_sets_match",
        "prolongation_reflected_to_bound",
        "regular_vertex_bijection",
        "image_is_pointed_to_bound",
        "algebra_commutes_to_bound",
        "kernel_inclusion_to_bound",
    };
    return names;
}

PullbackSquare pullback_square(const Resolution& r) {
    auto e1 = make_algebra(r.e1);
    auto e2 = make_algebra(r.e2);
    auto f1 = make_algebra(r.f1);
    auto f2 = make_algebra(r.f2);
    return PullbackSquare{
        quotient_hom("pi1", e1, f1),
        quotient_hom("pi2", e2, f2),
        HomDescriptor::induced("f_star", r.functor, e1, e2),
        HomDescriptor::induced("f_restricted_star", r.restricted, f1, f2),
    };
}

KernelInclusionReport check_kernel_inclusion(const Resolution& r, std::size_t max_len, std::uint64_t max_index) {
    KernelInclusionReport report;
    const Graph& e2 = *r.e2;
    auto square = pullback_square(r);
    std::map<std::size_t, std::vector<std::pair<Path, std::optional<Path>>>> by_range;
    for (auto& p : enumerate_all_paths(e2, max_len, max_index)) {
        auto range = e2.range(p);
        if (r.f2_vertices.contains(range)) continue;
        auto pre = r.functor.decode(p);
        by_range[range].emplace_back(std::move(p), std::move(pre));
    }
    auto fail = [&](const std::string& why) {
        report.holds = false;
        if (report.witnesses.size() < 20) report.witnesses.push_back(why);
    };
    for (const auto& [range, paths] : by_range) {
        for (const auto& [gamma, gpre] : paths) {
            for (const auto& [delta, dpre] : paths) {
                ++report.monomials_checked;
                Monomial m{gamma, delta};
                if (auto image = square.pi2.map_monomial(m);
                    image && !AlgebraElement(square.pi2.codomain(), Terms{{*image, 1}}).is_zero()) {
                    fail(to_string(e2, m) + " is not in the kernel of the quotient onto F2");
                    continue;
                }
                if (!gpre || !dpre) {
                    fail(to_string(e2, m) + " has no preimage");
                    continue;
                }
                Monomial pre{*gpre, *dpre};
                auto back = square.f_star.map_monomial(pre);
                if (!back || !(*back == m))
                    fail("preimage " + to_string(*r.e1, pre) + " of " + to_string(e2, m) + " maps elsewhere");
            }
        }
    }
    return report;
}

namespace {

void image_checks(const Resolution& r, const Bounds& bounds, PullbackCertificate& cert) {
    const Graph& e1 = *r.e1;
    const Graph& e2 = *r.e2;
    bool ok = true;
    auto fail = [&](const std::string& why) {
        ok = false;
        if (cert.witnesses.size() < 50) cert.witnesses.push_back("image: " + why);
    };
    for (const auto& p : enumerate_all_paths(e2, bounds.max_len, bounds.max_index)) {
        if (p.is_vertex()) continue;
        auto pre = r.functor.decode(p);
        if (is_pointed(e2, p)) {
            if (!pre)
                fail("pointed path " + to_string(e2, p) + " has no preimage");
            else if (!(r.functor.eval(*pre) == p))
                fail("decoding " + to_string(e2, p) + " does not invert the functor");
        } else if (pre) {
            fail("path " + to_string(e2, p) + " is not pointed but lies in the image");
        }
    }
    for (const auto& q : enumerate_all_paths(e1, bounds.max_len, bounds.max_index)) {
        auto image = r.functor.eval(q);
        if (!q.is_vertex() && !is_pointed(e2, image)) fail("image of " + to_string(e1, q) + " is not pointed");
        auto back = r.functor.decode(image);
        if (!back || !(*back == q)) fail("decode does not invert the functor on " + to_string(e1, q));
    }
    cert.checks.set("image_is_pointed_to_bound", ok);
}

}  // namespace

PullbackCertificate verify_pullback(GraphPtr e2, const VertexSet& f2, Bounds bounds) {
    PullbackCertificate cert;
    cert.e2 = e2;
    cert.f2_vertices = f2;
    cert.bounds = bounds;
    for (const auto& name : pullback_check_names()) cert.checks.set(name, false);
    const Graph& g = *e2;
    for (auto v : f2)
        if (v >= g.vertex_count()) throw GraphError("vertex index out of range in F2");
    auto note = [&](const std::string& w) { cert.witnesses.push_back(w); };

    Graph f2_graph = subgraph_on(g, f2);
    auto f2_report = check_admissible(f2_graph, g, identity_map(f2_graph, g));
    cert.checks.set("f2_admissible", f2_report.admissible());
    for (const auto& w : f2_report.witnesses) note("F2: " + w);

    bool complement_nonempty = f2.size() < g.vertex_count();
    cert.checks.set("complement_nonempty", complement_nonempty);
    if (!complement_nonempty) note("F2 is all of E2: the square is degenerate");

    auto loops = short_loops_at(g, complement(g, f2));
    cert.checks.set("no_short_loops_outside_f2", loops.empty());
    for (auto b : loops) note("self-loop '" + g.bundle(b).label + "' at '" + g.vertex_id(g.bundle(b).src) + "' outside F2");

    try {
        cert.resolution = build_resolution(e2, f2);
    } catch (const PreconditionError& err) {
        note(std::string("construction: ") + err.what());
        return cert;
    }
    const Resolution& r = *cert.resolution;
    const Graph& e1 = *r.e1;

    auto f1_report = check_admissible(*r.f1, e1, identity_map(*r.f1, e1));
    cert.checks.set("f1_admissible", f1_report.admissible());
    for (const auto& w : f1_report.witnesses) note("F1: " + w);

    bool af = loop_free(e1);
    cert.checks.set("e1_loop_free", af);
    if (!af) note("E1 contains a cycle: the non-loop edges of E2 are not acyclic");

    bool same_vertices = e1.vertex_count() == g.vertex_count() && vertex_set_of(e1, *r.f1) == f2 &&
                         vertex_set_of(g, *r.f2) == f2;
    for (std::size_t v = 0; same_vertices && v < g.vertex_count(); ++v) same_vertices = e1.vertex_id(v) == g.vertex_id(v);
    cert.checks.set("vertex_sets_match", same_vertices);

    auto conditions = check_functor_conditions(r.functor, bounds.max_len, bounds.max_index);
    cert.checks.set("prolongation_reflected_to_bound", conditions.reflects_prolongation);
    cert.checks.set("regular_vertex_bijection", conditions.regular_bijection);
    for (const auto& w : conditions.witnesses) note("functor: " + w);

    image_checks(r, bounds, cert);

    auto square = pullback_square(r);
    auto comm = commutes(square.pi1, square.f_star, square.f_restricted_star, square.pi2, bounds.max_index);
    cert.checks.set("algebra_commutes_to_bound", comm.commutes);
    for (const auto& w : comm.witnesses) note("square: " + w);

    auto kernel = check_kernel_inclusion(r, bounds.max_len, bounds.max_index);
    cert.checks.set("kernel_inclusion_to_bound", kernel.holds);
    for (const auto& w : kernel.witnesses) note("kernel: " + w);

    cert.unital = true;  // graphs here always have finitely many vertices
    cert.e1_af = af;
    return cert;
}

}  // namespace pullgraph
