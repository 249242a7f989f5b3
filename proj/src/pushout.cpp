#include "pullgraph/pushout.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "pullgraph/subsets.hpp"

namespace pullgraph {

namespace {

std::optional<std::size_t> position(const std::vector<std::size_t>& v, std::size_t x) {
    auto it = std::find(v.begin(), v.end(), x);
    if (it == v.end()) return std::nullopt;
    return static_cast<std::size_t>(it - v.begin());
}

void check_injective(const std::vector<std::size_t>& map, const Graph& g, const char* side) {
    std::set<std::size_t> seen;
    for (auto v : map)
        if (!seen.insert(v).second)
            throw PreconditionError(std::string("attachment into ") + side + " is not injective at '" + g.vertex_id(v) + "'");
}

}  // namespace

AmalgamationData parse_attachment(GraphPtr e, GraphPtr h, std::string_view spec) {
    AmalgamationData d{{}, e, h, {}, {}};
    while (!spec.empty()) {
        auto comma = spec.find(',');
        auto item = spec.substr(0, comma);
        spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string_view::npos) throw PreconditionError("attachment entry '" + std::string(item) + "' lacks '='");
        auto ev = e->find_vertex(item.substr(0, eq));
        auto hv = h->find_vertex(item.substr(eq + 1));
        if (!ev)
            throw PreconditionError("attachment is not total: '" + std::string(item.substr(0, eq)) + "' is not a vertex of " +
                                    e->name());
        if (!hv)
            throw PreconditionError("attachment is not total: '" + std::string(item.substr(eq + 1)) +
                                    "' is not a vertex of " + h->name());
        d.x.emplace_back(item.substr(0, eq));
        d.iota_e.push_back(*ev);
        d.iota_h.push_back(*hv);
    }
    check_injective(d.iota_e, *e, "E");
    check_injective(d.iota_h, *h, "H");
    return d;
}

std::string glued_vertex_id_e(const AmalgamationData& d, std::size_t v) { return d.e->vertex_id(v); }

std::string glued_vertex_id_h(const AmalgamationData& d, std::size_t v) {
    if (auto i = position(d.iota_h, v)) return d.e->vertex_id(d.iota_e[*i]);
    return "H:" + d.h->vertex_id(v);
}

std::string glued_label_e(const std::string& label) { return "E:" + label; }
std::string glued_label_h(const std::string& label) { return "H:" + label; }

Graph pushout_over_sinks(const AmalgamationData& d, std::string name) {
    const Graph& e = *d.e;
    const Graph& h = *d.h;
    if (d.iota_e.size() != d.x.size() || d.iota_h.size() != d.x.size())
        throw PreconditionError("attachment maps must be defined on all of X");
    check_injective(d.iota_e, e, "E");
    check_injective(d.iota_h, h, "H");
    auto sinks_in = [](const Graph& g, const std::vector<std::size_t>& map) -> std::optional<std::size_t> {
        for (auto v : map)
            if (classify_vertex(g, v) != VertexClass::Sink) return v;
        return std::nullopt;
    };
    auto bad_e = sinks_in(e, d.iota_e);
    auto bad_h = sinks_in(h, d.iota_h);
    if (bad_e && bad_h)
        throw PreconditionError("neither side of the attachment consists of sinks: '" + e.vertex_id(*bad_e) +
                                "' is not a sink of " + e.name() + " and '" + h.vertex_id(*bad_h) + "' is not a sink of " +
                                h.name());
    GraphData out;
    out.name = name.empty() ? e.name() + "_glued" : std::move(name);
    for (std::size_t v = 0; v < e.vertex_count(); ++v) out.vertices.push_back(glued_vertex_id_e(d, v));
    for (std::size_t v = 0; v < h.vertex_count(); ++v)
        if (!position(d.iota_h, v)) out.vertices.push_back(glued_vertex_id_h(d, v));
    for (std::size_t b = 0; b < e.bundle_count(); ++b) {
        const auto& bundle = e.bundle(b);
        out.bundles.push_back({glued_label_e(bundle.label), glued_vertex_id_e(d, bundle.src),
                               glued_vertex_id_e(d, bundle.dst), bundle.mult});
    }
    for (std::size_t b = 0; b < h.bundle_count(); ++b) {
        const auto& bundle = h.bundle(b);
        out.bundles.push_back({glued_label_h(bundle.label), glued_vertex_id_h(d, bundle.src),
                               glued_vertex_id_h(d, bundle.dst), bundle.mult});
    }
    auto issues = validate_graph(out);
    if (!issues.empty()) throw PreconditionError("glued graph is invalid: " + issues.front().message);
    return Graph(std::move(out));
}

GraphFunctor extend_functor(const GraphFunctor& base, const AmalgamationData& d1, const AmalgamationData& d2,
                            GraphPtr glued1, GraphPtr glued2) {
    if (d1.h.get() != d2.h.get() && !same_structure(*d1.h, *d2.h))
        throw PreconditionError("the two attachments use different graphs H");
    if (d1.x != d2.x || d1.iota_h != d2.iota_h) throw PreconditionError("the two attachments use different sets X");
    if (!(base.source() == *d1.e) || !(base.target() == *d2.e))
        throw PreconditionError("the base functor does not run between the attached graphs");
    for (std::size_t i = 0; i < d1.x.size(); ++i)
        if (base.map_vertex(d1.iota_e[i]) != d2.iota_e[i])
            throw PreconditionError("the base functor does not intertwine the attachments at '" + d1.x[i] + "'");

    const Graph& g1 = *glued1;
    const Graph& g2 = *glued2;
    const Graph& h = *d1.h;
    std::vector<std::size_t> vmap(g1.vertex_count(), SIZE_MAX);
    for (std::size_t v = 0; v < d1.e->vertex_count(); ++v)
        vmap[g1.vertex(glued_vertex_id_e(d1, v))] = g2.vertex(glued_vertex_id_e(d2, base.map_vertex(v)));
    for (std::size_t v = 0; v < h.vertex_count(); ++v) {
        auto from = g1.vertex(glued_vertex_id_h(d1, v));
        auto to = g2.vertex(glued_vertex_id_h(d2, v));
        if (vmap[from] != SIZE_MAX && vmap[from] != to)
            throw PreconditionError("glued vertex '" + g1.vertex_id(from) + "' has two images");
        vmap[from] = to;
    }

    auto to_glued2 = [&](std::size_t e2_bundle) { return g2.bundle_index(glued_label_e(d2.e->bundle(e2_bundle).label)); };
    std::vector<EdgeRule> rules(g1.bundle_count());
    for (std::size_t b = 0; b < d1.e->bundle_count(); ++b) {
        EdgeRule rule = base.rule(b);
        if (auto* t = std::get_if<ExplicitTemplate>(&rule)) {
            for (auto& factor : t->factors) factor.bundle = to_glued2(factor.bundle);
        } else {
            auto& c = std::get<CanonicalResolution>(rule);
            c.final_bundle = to_glued2(c.final_bundle);
        }
        rules[g1.bundle_index(glued_label_e(d1.e->bundle(b).label))] = std::move(rule);
    }
    for (std::size_t b = 0; b < h.bundle_count(); ++b) {
        auto target = g2.bundle_index(glued_label_h(h.bundle(b).label));
        rules[g1.bundle_index(glued_label_h(h.bundle(b).label))] =
            ExplicitTemplate{{Factor{target, Factor::Kind::SameIndex, 0}}};
    }
    GraphFunctor psi("psi", glued1, glued2, std::move(vmap), std::move(rules));
    for (const auto& [edge, image] : base.overrides()) {
        Path translated{g2.vertex(glued_vertex_id_e(d2, image.base)), {}};
        for (const auto& e : image.edges) translated.edges.push_back({to_glued2(e.bundle), e.index});
        psi.set_override({g1.bundle_index(glued_label_e(d1.e->bundle(edge.bundle).label)), edge.index},
                         std::move(translated));
    }
    return psi;
}

const std::vector<std::string>& extension_check_names() {
    static const std::vector<std::string> names = {
        "base_pullback_verified",
        "iota_e1_into_sinks",
        "iota_e2_into_sinks",
        "phi_vertex_conditions",
        "phi_paths_into_x_in_image_to_bound",
        "delta_annihilates_x",
        "extended_square_commutes_to_bound",
    };
    return names;
}

HomDescriptor extended_quotient(const GraphPtr& glued, const GraphPtr& target, std::string name) {
    const Graph& g = *glued;
    const Graph& t = *target;
    HomDescriptor::GeneratorMap map;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        const auto& id = g.vertex_id(v);
        map.vertices.push_back(id.starts_with("H:") ? std::nullopt : t.find_vertex(id));
    }
    for (std::size_t b = 0; b < g.bundle_count(); ++b) {
        const auto& label = g.bundle(b).label;
        map.bundles.push_back(label.starts_with("E:") ? t.find_bundle(label.substr(2)) : std::nullopt);
    }
    return HomDescriptor::generator_map(std::move(name), std::move(map), make_algebra(glued), make_algebra(target));
}

ExtensionCertificate verify_extension(const PullbackCertificate& base, GraphPtr h, std::string_view attach, Bounds bounds) {
    if (!base.resolution) throw PreconditionError("the base certificate has no resolution to extend");
    const Resolution& r = *base.resolution;
    ExtensionCertificate cert;
    cert.bounds = bounds;
    cert.h = h;
    for (const auto& name : extension_check_names()) cert.checks.set(name, false);
    auto note = [&](const std::string& w) {
        if (cert.witnesses.size() < 50) cert.witnesses.push_back(w);
    };

    auto d1 = parse_attachment(r.e1, h, attach);
    auto d2 = parse_attachment(r.e2, h, attach);
    for (std::size_t i = 0; i < d1.x.size(); ++i) cert.attach.emplace_back(d1.x[i], h->vertex_id(d1.iota_h[i]));

    cert.checks.set("base_pullback_verified", base.verified());
    if (!base.verified()) note("(base) the pullback certificate is not verified");

    auto into_sinks = [&](const AmalgamationData& d, const char* which) {
        bool ok = true;
        for (auto v : d.iota_e) {
            if (classify_vertex(*d.e, v) != VertexClass::Sink) {
                ok = false;
                note(std::string("(a) '") + d.e->vertex_id(v) + "' is not a sink of " + which);
            }
        }
        return ok;
    };
    cert.checks.set("iota_e1_into_sinks", into_sinks(d1, "E1"));
    cert.checks.set("iota_e2_into_sinks", into_sinks(d2, "E2"));

    const auto& f = r.functor;
    bool phi_ok = true;
    for (std::size_t v = 0; v < r.e1->vertex_count(); ++v) {
        if (r.e2->vertex_id(f.map_vertex(v)) != r.e1->vertex_id(v)) {
            phi_ok = false;
            note("(b) the functor moves vertex '" + r.e1->vertex_id(v) + "'");
        }
    }
    for (const auto& issue : f.validate(bounds.max_index)) {
        phi_ok = false;
        note("(b) " + issue);
    }
    cert.checks.set("phi_vertex_conditions", phi_ok);

    bool paths_ok = true;
    VertexSet x2(d2.iota_e.begin(), d2.iota_e.end());
    for (const auto& p : enumerate_all_paths(*r.e2, bounds.max_len, bounds.max_index)) {
        if (!x2.contains(r.e2->range(p))) continue;
        auto pre = f.decode(p);
        if (!pre || !(f.eval(*pre) == p)) {
            paths_ok = false;
            note("(c) path " + to_string(*r.e2, p) + " ending in X is not in the image");
        }
    }
    cert.checks.set("phi_paths_into_x_in_image_to_bound", paths_ok);

    bool disjoint = true;
    for (auto v : d1.iota_e) {
        if (r.f1->find_vertex(r.e1->vertex_id(v))) {
            disjoint = false;
            note("(d) '" + r.e1->vertex_id(v) + "' lies in F1, so the quotient does not annihilate it");
        }
    }
    cert.checks.set("delta_annihilates_x", disjoint);

    try {
        cert.glued1 = share(pushout_over_sinks(d1, r.e1->name() + "_glued"));
        cert.glued2 = share(pushout_over_sinks(d2, r.e2->name() + "_glued"));
        d1.e = r.e1;
        d2.e = r.e2;
        cert.psi = extend_functor(f, d1, d2, cert.glued1, cert.glued2);
    } catch (const PreconditionError& err) {
        note(std::string("(e) ") + err.what());
        return cert;
    }

    auto delta = extended_quotient(cert.glued1, r.f1, "delta_ext");
    auto theta = extended_quotient(cert.glued2, r.f2, "theta_ext");
    auto psi_star = HomDescriptor::induced("psi_star", *cert.psi, delta.domain(), theta.domain());
    auto restricted = HomDescriptor::induced("f_restricted_star", r.restricted, delta.codomain(), theta.codomain());
    auto comm = commutes(delta, psi_star, restricted, theta, bounds.max_index);
    cert.checks.set("extended_square_commutes_to_bound", comm.commutes);
    for (const auto& w : comm.witnesses) note("(e) " + w);

    cert.corners = {"C*(" + cert.glued1->name() + ")", "C*(" + r.f1->name() + ")", "C*(" + cert.glued2->name() + ")",
                    "C*(" + r.f2->name() + ")"};
    return cert;
}

KernelDescriptorReport kernel_descriptor_check(const PullbackCertificate& base, const ExtensionCertificate& ext,
                                               Bounds bounds) {
    if (!base.resolution || !ext.glued1) throw PreconditionError("extension was not constructed");
    const Resolution& r = *base.resolution;
    const Graph& g = *ext.glued1;
    auto delta = extended_quotient(ext.glued1, r.f1, "delta_ext");
    KernelDescriptorReport report;
    std::map<std::size_t, std::vector<Path>> by_range;
    for (auto& p : enumerate_all_paths(g, bounds.max_len, bounds.max_index)) by_range[g.range(p)].push_back(std::move(p));
    auto uses_h = [&](const Path& p) {
        return std::any_of(p.edges.begin(), p.edges.end(),
                           [&](const Edge& e) { return g.bundle(e.bundle).label.starts_with("H:"); });
    };
    for (const auto& [range, paths] : by_range) {
        bool outside = !r.f1->find_vertex(g.vertex_id(range));
        for (const auto& alpha : paths) {
            for (const auto& beta : paths) {
                ++report.monomials_checked;
                Monomial m{alpha, beta};
                bool predicate = outside || uses_h(alpha) || uses_h(beta);
                bool killed = delta.apply(AlgebraElement(delta.domain(), Terms{{m, 1}})).is_zero();
                if (killed) ++report.in_kernel;
                if (killed != predicate) {
                    report.agrees = false;
                    if (report.witnesses.size() < 20)
                        report.witnesses.push_back(to_string(g, m) + (killed ? " is" : " is not") +
                                                   " in the kernel, against the descriptor");
                }
            }
        }
    }
    return report;
}

}  // namespace pullgraph
