#include "pullgraph/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <memory>

#include "pullgraph/pushout.hpp"

namespace pullgraph {

namespace {

using Params = std::vector<std::uint64_t>;

std::string num(std::uint64_t n) { return std::to_string(n); }

void arity(const std::string& key, const Params& p, std::size_t lo, std::size_t hi) {
    if (p.size() < lo || p.size() > hi)
        throw CatalogError("'" + key + "' takes " + (lo == hi ? num(lo) : num(lo) + " to " + num(hi)) + " parameters, got " +
                           num(p.size()));
}

std::uint64_t at_least(const std::string& key, const char* what, std::uint64_t value, std::uint64_t min) {
    if (value < min) throw CatalogError("'" + key + "': " + what + " must be at least " + num(min));
    if (value > 64) throw CatalogError("'" + key + "': " + what + " must be at most 64");
    return value;
}

Graph make(std::string name, std::vector<std::string> vertices, std::vector<BundleData> bundles) {
    return Graph(GraphData{std::move(name), std::move(vertices), std::move(bundles)});
}

Graph wn(std::uint64_t n) {
    std::vector<std::string> v{"r0"};
    std::vector<BundleData> b;
    for (std::uint64_t j = 1; j <= n; ++j) {
        v.push_back("r" + num(j));
        b.push_back({"f" + num(j), "r0", "r" + num(j), ExtNat::infinity()});
    }
    return make("wn_" + num(n), std::move(v), std::move(b));
}

Graph rnm(std::uint64_t n, std::uint64_t m, const Params& mults) {
    std::vector<std::string> v{"r0"};
    std::vector<BundleData> b{{"e", "r0", "r0", m}};
    std::string name = "rnm_" + num(n) + "_" + num(m);
    for (std::uint64_t j = 1; j <= n; ++j) {
        v.push_back("r" + num(j));
        b.push_back({"f" + num(j), "r0", "r" + num(j), mults[j - 1]});
        name += "_" + num(mults[j - 1]);
    }
    return make(std::move(name), std::move(v), std::move(b));
}

Graph h_chain(std::uint64_t k) {
    std::vector<std::string> v;
    std::vector<BundleData> b;
    for (std::uint64_t j = 1; j <= k; ++j) v.push_back("r" + num(j));
    v.push_back("h");
    for (std::uint64_t j = 1; j <= k; ++j) b.push_back({"h" + num(j), "r" + num(j), j == k ? "h" : "r" + num(j + 1), 1});
    return make("h_chain_" + num(k), std::move(v), std::move(b));
}

Graph h_cycle(std::uint64_t k) {
    std::vector<std::string> v;
    std::vector<BundleData> b;
    for (std::uint64_t j = 1; j <= k; ++j) v.push_back("r" + num(j));
    for (std::uint64_t j = 1; j <= k; ++j) b.push_back({"h" + num(j), "r" + num(j), "r" + num(j % k + 1), 1});
    return make("h_cycle_" + num(k), std::move(v), std::move(b));
}

// Glues h_chain(k) onto the sinks r1..rn of `e`, matching r_j with r_j.
Graph glue_chain(Graph e, std::uint64_t n, std::uint64_t k, std::string name) {
    auto eg = share(std::move(e));
    auto hg = share(h_chain(k));
    std::string attach;
    for (std::uint64_t j = 1; j <= std::min(n, k); ++j) attach += (j > 1 ? ",r" : "r") + num(j) + "=r" + num(j);
    return pushout_over_sinks(parse_attachment(eg, hg, attach), std::move(name));
}

Graph ladder(const std::string& name, std::uint64_t vertices, std::uint64_t loops, bool infinite) {
    std::vector<std::string> v;
    std::vector<BundleData> b;
    for (std::uint64_t i = 0; i < vertices; ++i) v.push_back(num(i));
    for (std::uint64_t i = 0; i < loops; ++i) b.push_back({"l" + num(i), num(i), num(i), 1});
    for (std::uint64_t i = 0; i < vertices; ++i)
        for (std::uint64_t j = i + 1; j < vertices; ++j)
            b.push_back({"e" + num(i) + "_" + num(j), num(i), num(j), infinite ? ExtNat::infinity() : ExtNat(1)});
    return make(name, std::move(v), std::move(b));
}

std::vector<CatalogEntry> build_entries() {
    std::vector<CatalogEntry> out;
    out.push_back({"point", "", "one vertex, no edges: the complex numbers", [](const Params& p) {
                       arity("point", p, 0, 0);
                       return make("point", {"p"}, {});
                   }});
    out.push_back({"circle", "", "one vertex with one loop: continuous functions on the circle", [](const Params& p) {
                       arity("circle", p, 0, 0);
                       return make("circle", {"v"}, {{"e", "v", "v", 1}});
                   }});
    out.push_back({"toeplitz", "", "loop at w1 and an edge w1 -> w2: the Toeplitz algebra", [](const Params& p) {
                       arity("toeplitz", p, 0, 0);
                       return make("toeplitz", {"w1", "w2"}, {{"t1", "w1", "w1", 1}, {"t2", "w1", "w2", 1}});
                   }});
    out.push_back({"podles", "", "infinitely many edges v1 -> v2: the standard Podles sphere", [](const Params& p) {
                       arity("podles", p, 0, 0);
                       return make("podles", {"v1", "v2"}, {{"e", "v1", "v2", ExtNat::infinity()}});
                   }});
    out.push_back({"cuntz", "m", "one vertex with m loops: the Cuntz algebra O_m", [](const Params& p) {
                       arity("cuntz", p, 1, 1);
                       auto m = at_least("cuntz", "m", p[0], 1);
                       return make("cuntz_" + num(m), {"1"}, {{"e", "1", "1", m}});
                   }});
    out.push_back({"rp2q", "", "loop at top and two edges top -> bottom: the quantum real projective plane",
                   [](const Params& p) {
                       arity("rp2q", p, 0, 0);
                       return make("rp2q", {"top", "bottom"}, {{"loop", "top", "top", 1}, {"e", "top", "bottom", 2}});
                   }});
    out.push_back({"eq_sphere", "", "loop at top and edges to two sinks: the equatorial Podles sphere",
                   [](const Params& p) {
                       arity("eq_sphere", p, 0, 0);
                       return make("eq_sphere", {"top", "left", "right"},
                                   {{"loop", "top", "top", 1}, {"a", "top", "left", 1}, {"b", "top", "right", 1}});
                   }});
    out.push_back({"ball", "n", "vertices 0..n, loops below n, edges i -> j for i < j: the quantum ball B^{2n}",
                   [](const Params& p) {
                       arity("ball", p, 1, 1);
                       auto n = at_least("ball", "n", p[0], 1);
                       return ladder("ball_" + num(n), n + 1, n, false);
                   }});
    out.push_back({"sphere_odd", "n", "vertices 0..n-1, all looped, edges i -> j for i < j: the quantum sphere S^{2n-1}",
                   [](const Params& p) {
                       arity("sphere_odd", p, 1, 1);
                       auto n = at_least("sphere_odd", "n", p[0], 1);
                       return ladder("sphere_odd_" + num(n), n, n, false);
                   }});
    out.push_back({"cpn", "n", "vertices 0..n, infinitely many edges i -> j for i < j: the quantum projective space",
                   [](const Params& p) {
                       arity("cpn", p, 1, 1);
                       auto n = at_least("cpn", "n", p[0], 0);
                       return ladder("cpn_" + num(n), n + 1, 0, true);
                   }});
    out.push_back({"wn", "n", "infinitely many edges r0 -> rj, j = 1..n: the quantum teardrop WP(1,n)",
                   [](const Params& p) {
                       arity("wn", p, 1, 1);
                       return wn(at_least("wn", "n", p[0], 1));
                   }});
    out.push_back({"rnm", "n,m[,i1..in]", "m loops at r0 and i_j edges r0 -> rj: n-sink extension of the Cuntz graph",
                   [](const Params& p) {
                       if (p.size() < 2) throw CatalogError("'rnm' takes n,m and optionally i1..in");
                       auto n = at_least("rnm", "n", p[0], 1);
                       auto m = at_least("rnm", "m", p[1], 1);
                       if (p.size() != 2 && p.size() != 2 + n)
                           throw CatalogError("'rnm' takes either no edge counts or exactly n of them");
                       Params mults(n, 1);
                       for (std::uint64_t j = 0; j < n && p.size() > 2; ++j) mults[j] = at_least("rnm", "i_j", p[2 + j], 1);
                       return rnm(n, m, mults);
                   }});
    out.push_back({"h_chain", "k", "path r1 -> r2 -> ... -> rk -> h: sample graph to glue onto sinks", [](const Params& p) {
                       arity("h_chain", p, 1, 1);
                       return h_chain(at_least("h_chain", "k", p[0], 1));
                   }});
    out.push_back({"h_cycle", "k", "cycle r1 -> ... -> rk -> r1: sample graph to glue onto sinks", [](const Params& p) {
                       arity("h_cycle", p, 1, 1);
                       return h_cycle(at_least("h_cycle", "k", p[0], 1));
                   }});
    out.push_back({"gn", "n[,k]", "wn(n) glued to h_chain(k) over its sinks (k defaults to n)", [](const Params& p) {
                       arity("gn", p, 1, 2);
                       auto n = at_least("gn", "n", p[0], 1);
                       auto k = p.size() > 1 ? at_least("gn", "k", p[1], 1) : n;
                       return glue_chain(wn(n), n, k, "gn_" + num(n) + "_" + num(k));
                   }});
    out.push_back({"enm", "n,m[,k]", "rnm(n,m) glued to h_chain(k) over its sinks (k defaults to n)", [](const Params& p) {
                       arity("enm", p, 2, 3);
                       auto n = at_least("enm", "n", p[0], 1);
                       auto m = at_least("enm", "m", p[1], 1);
                       auto k = p.size() > 2 ? at_least("enm", "k", p[2], 1) : n;
                       return glue_chain(rnm(n, m, Params(n, 1)), n, k, "enm_" + num(n) + "_" + num(m) + "_" + num(k));
                   }});
    return out;
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
    static const std::vector<CatalogEntry> entries = build_entries();
    return entries;
}

Graph catalog_get(std::string_view key, const std::vector<std::uint64_t>& params) {
    for (const auto& entry : catalog_entries())
        if (entry.key == key) return entry.build(params);
    throw CatalogError("unknown catalog key '" + std::string(key) + "'");
}

Graph catalog_get(std::string_view spec) {
    auto colon = spec.find(':');
    auto key = spec.substr(0, colon);
    std::vector<std::uint64_t> params;
    if (colon != std::string_view::npos) {
        auto rest = spec.substr(colon + 1);
        while (true) {
            auto comma = rest.find(',');
            auto item = rest.substr(0, comma);
            std::uint64_t value = 0;
            auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
            if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
                throw CatalogError("malformed parameter '" + std::string(item) + "' in '" + std::string(spec) + "'");
            params.push_back(value);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
    }
    return catalog_get(key, params);
}

std::vector<std::string> catalog_sample_specs() {
    return {"point",     "circle",       "toeplitz",     "podles",    "cuntz:1",     "cuntz:2",   "cuntz:3",
            "rp2q",      "eq_sphere",    "ball:1",       "ball:2",    "ball:3",      "sphere_odd:1", "sphere_odd:2",
            "sphere_odd:3", "cpn:0",     "cpn:1",        "cpn:2",     "cpn:3",       "wn:1",      "wn:2",
            "wn:3",      "rnm:1,1",      "rnm:2,2",      "rnm:2,2,1,2", "rnm:3,1",   "h_chain:2", "h_cycle:2",
            "gn:1",      "gn:2",         "gn:2,3",       "enm:1,2",   "enm:2,2"};
}

}  // namespace pullgraph
