#include "pullgraph/certificate.hpp"

#include "pullgraph/graph_io.hpp"

namespace pullgraph {

using nlohmann::json;

namespace {

json header(const char* kind) {
    return json{{"schema", kCertificateSchema},
                {"version", kCertificateVersion},
                {"tool_version", PULLGRAPH_VERSION},
                {"kind", kind}};
}

json checks_to_json(const CheckList& checks) {
    json out = json::object();
    for (const auto& [name, value] : checks.entries()) out[name] = value;
    return out;
}

json bounds_to_json(const Bounds& b) { return json{{"max_len", b.max_len}, {"max_index", b.max_index}}; }

json vertex_list(const Graph& g, const VertexSet& s) {
    json out = json::array();
    for (auto v : s) out.push_back(g.vertex_id(v));
    return out;
}

}  // namespace

json functor_to_json(const GraphFunctor& f) {
    const auto& src = f.source();
    const auto& tgt = f.target();
    json vmap = json::object();
    for (std::size_t v = 0; v < src.vertex_count(); ++v) vmap[src.vertex_id(v)] = tgt.vertex_id(f.map_vertex(v));
    json rules = json::object();
    for (std::size_t b = 0; b < src.bundle_count(); ++b) rules[src.bundle(b).label] = rule_to_string(tgt, f.rule(b));
    json overrides = json::object();
    for (const auto& [edge, image] : f.overrides()) overrides[to_string(src, edge)] = to_string(tgt, image);
    return json{{"name", f.name()},
                {"source", src.name()},
                {"target", tgt.name()},
                {"vertex_map", vmap},
                {"rules", rules},
                {"overrides", overrides}};
}

json resolution_to_json(const Resolution& r) {
    return json{{"E1", graph_to_json(*r.e1)},
                {"F1", graph_to_json(*r.f1)},
                {"E2", graph_to_json(*r.e2)},
                {"F2", graph_to_json(*r.f2)},
                {"functor", functor_to_json(r.functor)}};
}

json pullback_to_json(const PullbackCertificate& cert) {
    json doc = header("pullback");
    doc["input"] = json{{"e2", graph_to_json(*cert.e2)}, {"f2", vertex_list(*cert.e2, cert.f2_vertices)}};
    doc["bounds"] = bounds_to_json(cert.bounds);
    if (cert.resolution) {
        const auto& r = *cert.resolution;
        doc["graphs"] = json{{"E1", graph_to_json(*r.e1)},
                             {"F1", graph_to_json(*r.f1)},
                             {"E2", graph_to_json(*r.e2)},
                             {"F2", graph_to_json(*r.f2)}};
        doc["functor"] = functor_to_json(r.functor);
    } else {
        doc["graphs"] = nullptr;
        doc["functor"] = nullptr;
    }
    doc["checks"] = checks_to_json(cert.checks);
    doc["flags"] = json{{"unital", cert.unital}, {"e1_af", cert.e1_af}};
    doc["verified"] = cert.verified();
    doc["witnesses"] = cert.witnesses;
    return doc;
}

PullbackCertificate reverify_pullback(const json& doc) {
    try {
        if (doc.at("schema") != kCertificateSchema) throw CertificateError("not a pullgraph certificate");
        if (doc.at("version").get<int>() != kCertificateVersion)
            throw CertificateError("unsupported certificate version " + doc.at("version").dump());
        if (doc.at("kind") != "pullback") throw CertificateError("expected a pullback certificate");
        auto e2 = share(graph_from_json(doc.at("input").at("e2")));
        VertexSet f2;
        for (const auto& id : doc.at("input").at("f2")) f2.insert(e2->vertex(id.get<std::string>()));
        Bounds bounds{doc.at("bounds").at("max_len").get<std::size_t>(), doc.at("bounds").at("max_index").get<std::uint64_t>()};
        return verify_pullback(std::move(e2), f2, bounds);
    } catch (const json::exception& err) {
        throw CertificateError(std::string("malformed certificate: ") + err.what());
    }
}

bool same_outcomes(const json& recorded, const PullbackCertificate& fresh) {
    json again = pullback_to_json(fresh);
    for (const char* key : {"checks", "flags", "verified", "graphs", "functor"})
        if (!recorded.contains(key) || recorded.at(key) != again.at(key)) return false;
    return true;
}

json extension_to_json(const PullbackCertificate& base, const ExtensionCertificate& ext) {
    json doc = header("extension");
    doc["base"] = pullback_to_json(base);
    doc["h"] = graph_to_json(*ext.h);
    json attach = json::array();
    for (const auto& [e, h] : ext.attach) attach.push_back(json{{"x", e}, {"h", h}});
    doc["attach"] = attach;
    doc["bounds"] = bounds_to_json(ext.bounds);
    doc["graphs"] = json{{"glued1", ext.glued1 ? graph_to_json(*ext.glued1) : json(nullptr)},
                         {"glued2", ext.glued2 ? graph_to_json(*ext.glued2) : json(nullptr)}};
    doc["functor"] = ext.psi ? functor_to_json(*ext.psi) : json(nullptr);
    doc["checks"] = checks_to_json(ext.checks);
    doc["corners"] = ext.corners;
    doc["verified"] = ext.verified();
    doc["witnesses"] = ext.witnesses;
    return doc;
}

}  // namespace pullgraph
