#include "pullgraph/subsets.hpp"

#include <algorithm>
#include <set>

namespace pullgraph {

namespace {

void check_members(const Graph& g, const VertexSet& s) {
    for (auto v : s)
        if (v >= g.vertex_count()) throw GraphError("vertex index out of range in subset");
}

}  // namespace

SubsetCheck is_hereditary(const Graph& g, const VertexSet& h) {
    check_members(g, h);
    for (std::size_t b = 0; b < g.bundle_count(); ++b) {
        const auto& bundle = g.bundle(b);
        if (h.contains(bundle.src) && !h.contains(bundle.dst)) return {false, b};
    }
    return {};
}

VertexSet hereditary_closure(const Graph& g, const VertexSet& h) {
    check_members(g, h);
    return reachable_from(g, h);
}

SubsetCheck is_saturated(const Graph& g, const VertexSet& h) {
    check_members(g, h);
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        if (h.contains(v) || classify_vertex(g, v) != VertexClass::Regular) continue;
        auto out = g.out_bundles(v);
        if (std::all_of(out.begin(), out.end(), [&](std::size_t b) { return h.contains(g.bundle(b).dst); }))
            return {false, v};
    }
    return {};
}

SubsetCheck emission_condition(const Graph& g, const VertexSet& h) {
    check_members(g, h);
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        ExtNat into, outside;
        for (auto b : g.out_bundles(v)) (h.contains(g.bundle(b).dst) ? into : outside) += g.bundle(b).mult;
        if (into.is_infinite() && !outside.is_zero() && outside.is_finite()) return {false, v};
    }
    return {};
}

VertexSet complement(const Graph& g, const VertexSet& s) {
    VertexSet out;
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        if (!s.contains(v)) out.insert(v);
    return out;
}

Graph induced_subgraph(const Graph& g, const VertexSet& s, std::string name) {
    check_members(g, s);
    GraphData d;
    d.name = std::move(name);
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        if (s.contains(v)) d.vertices.push_back(g.vertex_id(v));
    for (std::size_t b = 0; b < g.bundle_count(); ++b) {
        const auto& bundle = g.bundle(b);
        if (s.contains(bundle.src) && s.contains(bundle.dst))
            d.bundles.push_back({bundle.label, g.vertex_id(bundle.src), g.vertex_id(bundle.dst), bundle.mult});
    }
    return Graph(std::move(d));
}

std::vector<std::size_t> parse_vertex_map(const Graph& sub, const Graph& ambient, std::string_view spec) {
    std::vector<std::size_t> map(sub.vertex_count(), SIZE_MAX);
    bool any = false;
    while (!spec.empty()) {
        auto comma = spec.find(',');
        auto item = spec.substr(0, comma);
        spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string_view::npos) throw PreconditionError("vertex map entry '" + std::string(item) + "' lacks '='");
        map.at(sub.vertex(item.substr(0, eq))) = ambient.vertex(item.substr(eq + 1));
        any = true;
    }
    if (!any) {
        for (std::size_t v = 0; v < sub.vertex_count(); ++v) map[v] = ambient.vertex(sub.vertex_id(v));
    }
    for (std::size_t v = 0; v < sub.vertex_count(); ++v)
        if (map[v] == SIZE_MAX) throw PreconditionError("vertex map does not cover '" + sub.vertex_id(v) + "'");
    return map;
}

GraphInclusion infer_inclusion(const Graph& sub, const Graph& ambient, const std::vector<std::size_t>& vertex_map) {
    if (vertex_map.size() != sub.vertex_count()) throw PreconditionError("vertex map is not total");
    std::set<std::size_t> image;
    for (auto v : vertex_map) {
        if (v >= ambient.vertex_count()) throw PreconditionError("vertex map leaves the ambient graph");
        if (!image.insert(v).second) throw PreconditionError("vertex map is not injective");
    }
    GraphInclusion inc{vertex_map, std::vector<std::size_t>(sub.bundle_count(), SIZE_MAX)};
    std::vector<bool> used(ambient.bundle_count(), false);
    auto compatible = [&](std::size_t sb, std::size_t ab) {
        const auto& s = sub.bundle(sb);
        const auto& a = ambient.bundle(ab);
        return !used[ab] && a.src == vertex_map[s.src] && a.dst == vertex_map[s.dst] && s.mult <= a.mult;
    };
    for (std::size_t b = 0; b < sub.bundle_count(); ++b) {
        if (auto same = ambient.find_bundle(sub.bundle(b).label); same && compatible(b, *same)) {
            inc.bundle_map[b] = *same;
            used[*same] = true;
        }
    }
    for (std::size_t b = 0; b < sub.bundle_count(); ++b) {
        if (inc.bundle_map[b] != SIZE_MAX) continue;
        for (auto ab : ambient.out_bundles(vertex_map[sub.bundle(b).src])) {
            if (compatible(b, ab)) {
                inc.bundle_map[b] = ab;
                used[ab] = true;
                break;
            }
        }
        if (inc.bundle_map[b] == SIZE_MAX)
            throw PreconditionError("no ambient bundle can receive '" + sub.bundle(b).label +
                                    "': the vertex map is not a graph morphism");
    }
    return inc;
}

AdmissibilityReport check_admissible(const Graph& sub, const Graph& ambient, const GraphInclusion& inc) {
    AdmissibilityReport r;
    VertexSet image(inc.vertex_map.begin(), inc.vertex_map.end());
    VertexSet h = complement(ambient, image);

    auto hered = is_hereditary(ambient, h);
    r.a1_hereditary = hered.holds;
    if (!hered) r.witnesses.push_back("A1 hereditary: edge '" + ambient.bundle(*hered.witness).label + "' leaves the complement");
    auto sat = is_saturated(ambient, h);
    r.a1_saturated = sat.holds;
    if (!sat) r.witnesses.push_back("A1 saturated: regular vertex '" + ambient.vertex_id(*sat.witness) + "' sends all edges into the complement");

    r.a2_edge_condition = true;
    std::vector<std::optional<std::size_t>> preimage(ambient.bundle_count());
    for (std::size_t b = 0; b < sub.bundle_count(); ++b) preimage[inc.bundle_map[b]] = b;
    for (std::size_t ab = 0; ab < ambient.bundle_count(); ++ab) {
        const auto& bundle = ambient.bundle(ab);
        if (!image.contains(bundle.dst)) continue;
        if (!preimage[ab]) {
            r.a2_edge_condition = false;
            r.witnesses.push_back("A2: edge '" + bundle.label + "' ends in the subgraph but is not in it");
        } else if (sub.bundle(*preimage[ab]).mult != bundle.mult) {
            r.a2_edge_condition = false;
            r.witnesses.push_back("A2: bundle '" + bundle.label + "' has multiplicity " + bundle.mult.to_string() +
                                  " but its preimage has " + sub.bundle(*preimage[ab]).mult.to_string());
        }
    }

    auto emission = emission_condition(ambient, h);
    r.a3_emission_condition = emission.holds;
    if (!emission)
        r.witnesses.push_back("A3: vertex '" + ambient.vertex_id(*emission.witness) +
                              "' emits infinitely many edges into the complement and finitely many into the subgraph");
    return r;
}

AdmissibilityReport check_admissible(const Graph& sub, const Graph& ambient, const std::vector<std::size_t>& vertex_map) {
    return check_admissible(sub, ambient, infer_inclusion(sub, ambient, vertex_map));
}

Graph quotient_graph(const Graph& g, const VertexSet& h) {
    if (auto c = is_hereditary(g, h); !c)
        throw PreconditionError("quotient: set is not hereditary (edge '" + g.bundle(*c.witness).label + "' leaves it)");
    if (auto c = is_saturated(g, h); !c)
        throw PreconditionError("quotient: set is not saturated (witness vertex '" + g.vertex_id(*c.witness) + "')");
    if (auto c = emission_condition(g, h); !c)
        throw PreconditionError("quotient: emission condition fails at vertex '" + g.vertex_id(*c.witness) + "'");
    GraphData d;
    d.name = g.name() + "_quot";
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        if (!h.contains(v)) d.vertices.push_back(g.vertex_id(v));
    for (std::size_t b = 0; b < g.bundle_count(); ++b) {
        const auto& bundle = g.bundle(b);
        if (!h.contains(bundle.dst))
            d.bundles.push_back({bundle.label, g.vertex_id(bundle.src), g.vertex_id(bundle.dst), bundle.mult});
    }
    return Graph(std::move(d));
}

bool check_quotient_iso(const Graph& sub, const Graph& ambient, const std::vector<std::size_t>& vertex_map) {
    auto inc = infer_inclusion(sub, ambient, vertex_map);
    auto report = check_admissible(sub, ambient, inc);
    if (!report.admissible()) {
        std::string msg = "inclusion is not admissible:";
        for (const auto& w : report.witnesses) msg += " " + w + ";";
        throw PreconditionError(msg);
    }
    VertexSet image(vertex_map.begin(), vertex_map.end());
    Graph q = quotient_graph(ambient, complement(ambient, image));
    if (q.vertex_count() != sub.vertex_count()) return false;
    for (std::size_t u = 0; u < sub.vertex_count(); ++u) {
        for (std::size_t v = 0; v < sub.vertex_count(); ++v) {
            auto qu = q.vertex(ambient.vertex_id(vertex_map[u]));
            auto qv = q.vertex(ambient.vertex_id(vertex_map[v]));
            if (sub.multiplicity(u, v) != q.multiplicity(qu, qv)) return false;
        }
    }
    return true;
}

}  // namespace pullgraph
