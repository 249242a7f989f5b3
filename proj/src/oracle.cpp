#include "pullgraph/oracle.hpp"

#include <algorithm>
#include <map>

namespace pullgraph {

namespace {

std::string fresh_name(const std::string& stem, const auto& taken) {
    std::string name = stem;
    while (taken(name)) name = "_" + name;
    return name;
}

}  // namespace

OracleMatrix faithful_rep_oracle(const AlgebraElement& a) {
    const Algebra& alg = a.algebra();
    const Graph& g = alg.graph();
    if (!loop_free(g)) throw AlgebraError("the representation oracle needs an acyclic graph");
    for (std::size_t b = 0; b < g.bundle_count(); ++b)
        if (g.bundle(b).mult.is_infinite()) throw AlgebraError("the representation oracle needs finite multiplicities");

    GraphData d = g.data();
    std::map<std::size_t, std::string> exit_label;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        if (!alg.exempt(v) || classify_vertex(g, v) != VertexClass::Regular) continue;
        auto sink = fresh_name("sink_" + g.vertex_id(v), [&](const std::string& s) {
            return std::find(d.vertices.begin(), d.vertices.end(), s) != d.vertices.end();
        });
        auto label = fresh_name("exit_" + g.vertex_id(v), [&](const std::string& s) {
            return std::any_of(d.bundles.begin(), d.bundles.end(), [&](const BundleData& b) { return b.label == s; });
        });
        d.vertices.push_back(sink);
        d.bundles.push_back({label, g.vertex_id(v), sink, 1});
        exit_label[v] = label;
    }
    Graph big(std::move(d));

    auto translate = [&](const Path& p) {
        Path out{big.vertex(g.vertex_id(p.base)), {}};
        for (const auto& e : p.edges) out.edges.push_back({big.bundle_index(g.bundle(e.bundle).label), e.index});
        return out;
    };

    OracleMatrix m;
    std::map<Path, std::size_t> index;
    std::vector<Path> basis;
    std::size_t longest = big.vertex_count();
    for (const auto& p : enumerate_all_paths(big, longest, UINT64_MAX - 1)) {
        if (classify_vertex(big, big.range(p)) != VertexClass::Sink) continue;
        index.emplace(p, basis.size());
        basis.push_back(p);
        m.basis.push_back(to_string(big, p));
    }

    for (const auto& [mono, c] : a.terms()) {
        Path alpha = translate(mono.alpha);
        Path beta = translate(mono.beta);
        for (std::size_t col = 0; col < basis.size(); ++col) {
            const Path& mu = basis[col];
            auto rel = prolongation_compare(beta, mu);
            if (rel != PrefixRelation::Equal && rel != PrefixRelation::APrefixOfB) continue;
            Path image = alpha;
            image.edges.insert(image.edges.end(), mu.edges.begin() + static_cast<std::ptrdiff_t>(beta.length()), mu.edges.end());
            auto row = index.at(image);
            auto& entry = m.entries[{row, col}];
            entry += c;
            if (entry == 0) m.entries.erase({row, col});
        }
    }
    return m;
}

}  // namespace pullgraph
