#include "pullgraph/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <numeric>

namespace pullgraph {

namespace {

bool valid_identifier(std::string_view id) {
    if (id.empty()) return false;
    return std::none_of(id.begin(), id.end(), [](char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ',' || c == '.' || c == '[' ||
               c == ']' || c == '=' || c == '#' || c == '(' || c == ')';
    });
}

}  // namespace

const char* to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::InvalidIdentifier: return "InvalidIdentifier";
        case ViolationKind::DuplicateVertex: return "DuplicateVertex";
        case ViolationKind::DuplicateLabel: return "DuplicateLabel";
        case ViolationKind::UnknownVertex: return "UnknownVertex";
        case ViolationKind::ZeroMultiplicity: return "ZeroMultiplicity";
    }
    return "?";
}

std::vector<Violation> validate_graph(const GraphData& data) {
    std::vector<Violation> out;
    std::set<std::string> vertices;
    for (std::size_t i = 0; i < data.vertices.size(); ++i) {
        const auto& v = data.vertices[i];
        std::string loc = "vertex #" + std::to_string(i) + " '" + v + "'";
        if (!valid_identifier(v)) out.push_back({ViolationKind::InvalidIdentifier, loc, "invalid vertex id"});
        if (!vertices.insert(v).second) out.push_back({ViolationKind::DuplicateVertex, loc, "duplicate vertex id"});
    }
    std::set<std::string> labels;
    for (std::size_t i = 0; i < data.bundles.size(); ++i) {
        const auto& b = data.bundles[i];
        std::string loc = "bundle #" + std::to_string(i) + " '" + b.label + "'";
        if (!valid_identifier(b.label)) out.push_back({ViolationKind::InvalidIdentifier, loc, "invalid label"});
        if (!labels.insert(b.label).second) out.push_back({ViolationKind::DuplicateLabel, loc, "duplicate label"});
        if (!vertices.contains(b.src))
            out.push_back({ViolationKind::UnknownVertex, loc, "unknown source vertex '" + b.src + "'"});
        if (!vertices.contains(b.dst))
            out.push_back({ViolationKind::UnknownVertex, loc, "unknown range vertex '" + b.dst + "'"});
        if (b.mult.is_zero()) out.push_back({ViolationKind::ZeroMultiplicity, loc, "multiplicity must be >= 1"});
    }
    return out;
}

Graph::Graph(GraphData data) {
    if (auto violations = validate_graph(data); !violations.empty()) {
        std::string msg = "invalid graph '" + data.name + "':";
        for (const auto& v : violations) msg += " [" + std::string(to_string(v.kind)) + " at " + v.location + "]";
        throw GraphError(msg);
    }
    name_ = std::move(data.name);
    vertices_ = std::move(data.vertices);
    for (std::size_t i = 0; i < vertices_.size(); ++i) vertex_index_.emplace(vertices_[i], i);

    std::sort(data.bundles.begin(), data.bundles.end(),
              [](const BundleData& a, const BundleData& b) { return a.label < b.label; });
    out_.resize(vertices_.size());
    in_.resize(vertices_.size());
    for (auto& b : data.bundles) {
        Bundle bundle{std::move(b.label), vertex_index_.at(b.src), vertex_index_.at(b.dst), b.mult};
        std::size_t id = bundles_.size();
        bundle_index_.emplace(bundle.label, id);
        out_[bundle.src].push_back(id);
        in_[bundle.dst].push_back(id);
        bundles_.push_back(std::move(bundle));
    }
}

std::optional<std::size_t> Graph::find_vertex(std::string_view id) const {
    auto it = vertex_index_.find(std::string(id));
    if (it == vertex_index_.end()) return std::nullopt;
    return it->second;
}

std::size_t Graph::vertex(std::string_view id) const {
    if (auto v = find_vertex(id)) return *v;
    throw GraphError("unknown vertex '" + std::string(id) + "' in graph '" + name_ + "'");
}

std::optional<std::size_t> Graph::find_bundle(std::string_view label) const {
    auto it = bundle_index_.find(std::string(label));
    if (it == bundle_index_.end()) return std::nullopt;
    return it->second;
}

std::size_t Graph::bundle_index(std::string_view label) const {
    if (auto b = find_bundle(label)) return *b;
    throw GraphError("unknown bundle '" + std::string(label) + "' in graph '" + name_ + "'");
}

ExtNat Graph::multiplicity(std::size_t v, std::size_t w) const {
    ExtNat total;
    for (auto b : out_bundles(v))
        if (bundles_[b].dst == w) total += bundles_[b].mult;
    return total;
}

ExtNat Graph::out_multiplicity(std::size_t v) const {
    ExtNat total;
    for (auto b : out_bundles(v)) total += bundles_[b].mult;
    return total;
}

bool Graph::is_valid(const Edge& e) const {
    return e.bundle < bundles_.size() && bundles_[e.bundle].mult.admits_index(e.index);
}

bool Graph::is_valid(const Path& p) const {
    if (p.base >= vertices_.size()) return false;
    std::size_t at = p.base;
    for (const auto& e : p.edges) {
        if (!is_valid(e) || source(e) != at) return false;
        at = range(e);
    }
    return true;
}

GraphData Graph::data() const {
    GraphData d{name_, vertices_, {}};
    for (const auto& b : bundles_) d.bundles.push_back({b.label, vertices_[b.src], vertices_[b.dst], b.mult});
    return d;
}

bool same_structure(const Graph& a, const Graph& b) {
    GraphData da = a.data(), db = b.data();
    da.name.clear();
    db.name.clear();
    return da == db;
}

const char* to_string(VertexClass c) {
    switch (c) {
        case VertexClass::Sink: return "Sink";
        case VertexClass::Regular: return "Regular";
        case VertexClass::InfiniteEmitter: return "InfiniteEmitter";
    }
    return "?";
}

VertexClass classify_vertex(const Graph& g, std::size_t v) {
    if (v >= g.vertex_count()) throw GraphError("vertex index out of range");
    ExtNat out = g.out_multiplicity(v);
    if (out.is_zero()) return VertexClass::Sink;
    return out.is_infinite() ? VertexClass::InfiniteEmitter : VertexClass::Regular;
}

VertexClass classify_vertex(const Graph& g, std::string_view v) { return classify_vertex(g, g.vertex(v)); }

std::vector<Path> enumerate_paths(const Graph& g, std::size_t from, std::optional<std::size_t> to,
                                  std::size_t max_len, std::uint64_t max_index) {
    if (from >= g.vertex_count() || (to && *to >= g.vertex_count())) throw GraphError("vertex index out of range");
    std::vector<Path> out;
    std::vector<Path> level{Path::vertex(from)};
    for (std::size_t len = 0;; ++len) {
        for (const auto& p : level)
            if (!to || g.range(p) == *to) out.push_back(p);
        if (len == max_len) break;
        std::vector<Path> next;
        for (const auto& p : level) {
            for (auto b : g.out_bundles(g.range(p))) {
                const auto& bundle = g.bundle(b);
                std::uint64_t top = bundle.mult.is_infinite() ? max_index : std::min(max_index, bundle.mult.value() - 1);
                for (std::uint64_t i = 0; i <= top; ++i) {
                    Path q = p;
                    q.edges.push_back({b, i});
                    next.push_back(std::move(q));
                }
            }
        }
        if (next.empty()) break;
        level = std::move(next);
    }
    return out;
}

std::vector<Path> enumerate_paths(const Graph& g, std::string_view from, std::optional<std::string_view> to,
                                  std::size_t max_len, std::uint64_t max_index) {
    std::optional<std::size_t> to_index;
    if (to) to_index = g.vertex(*to);
    return enumerate_paths(g, g.vertex(from), to_index, max_len, max_index);
}

std::vector<Path> enumerate_all_paths(const Graph& g, std::size_t max_len, std::uint64_t max_index) {
    std::vector<Path> out;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        auto paths = enumerate_paths(g, v, std::nullopt, max_len, max_index);
        out.insert(out.end(), std::make_move_iterator(paths.begin()), std::make_move_iterator(paths.end()));
    }
    return out;
}

const char* to_string(PrefixRelation r) {
    switch (r) {
        case PrefixRelation::Equal: return "Equal";
        case PrefixRelation::APrefixOfB: return "APrefixOfB";
        case PrefixRelation::BPrefixOfA: return "BPrefixOfA";
        case PrefixRelation::Incomparable: return "Incomparable";
    }
    return "?";
}

PrefixRelation prolongation_compare(const Path& a, const Path& b) {
    if (a.base != b.base) return PrefixRelation::Incomparable;
    std::size_t n = std::min(a.edges.size(), b.edges.size());
    if (!std::equal(a.edges.begin(), a.edges.begin() + static_cast<std::ptrdiff_t>(n), b.edges.begin()))
        return PrefixRelation::Incomparable;
    if (a.edges.size() == b.edges.size()) return PrefixRelation::Equal;
    return a.edges.size() < b.edges.size() ? PrefixRelation::APrefixOfB : PrefixRelation::BPrefixOfA;
}

bool is_pointed(const Graph& g, const Path& p) { return !p.edges.empty() && !g.bundle(p.edges.back().bundle).is_loop(); }

bool loop_free(const Graph& g) {
    // Kahn's algorithm; self-loops count as cycles.
    std::vector<std::size_t> indegree(g.vertex_count(), 0);
    for (std::size_t b = 0; b < g.bundle_count(); ++b) {
        if (g.bundle(b).is_loop()) return false;
        ++indegree[g.bundle(b).dst];
    }
    std::vector<std::size_t> ready;
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        if (indegree[v] == 0) ready.push_back(v);
    std::size_t seen = 0;
    while (!ready.empty()) {
        auto v = ready.back();
        ready.pop_back();
        ++seen;
        for (auto b : g.out_bundles(v))
            if (--indegree[g.bundle(b).dst] == 0) ready.push_back(g.bundle(b).dst);
    }
    return seen == g.vertex_count();
}

std::vector<std::size_t> short_loops_at(const Graph& g, const VertexSet& s) {
    std::vector<std::size_t> out;
    for (auto v : s)
        if (v >= g.vertex_count()) throw GraphError("vertex index out of range");
    for (std::size_t b = 0; b < g.bundle_count(); ++b)
        if (g.bundle(b).is_loop() && s.contains(g.bundle(b).src)) out.push_back(b);
    return out;
}

Path concat(const Graph& g, const Path& a, const Path& b) {
    if (g.range(a) != b.base) throw GraphError("cannot concatenate paths: range/source mismatch");
    Path out = a;
    out.edges.insert(out.edges.end(), b.edges.begin(), b.edges.end());
    return out;
}

VertexSet reachable_from(const Graph& g, const VertexSet& start) {
    VertexSet seen = start;
    std::vector<std::size_t> stack(start.begin(), start.end());
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto b : g.out_bundles(v))
            if (seen.insert(g.bundle(b).dst).second) stack.push_back(g.bundle(b).dst);
    }
    return seen;
}

std::string to_string(const Graph& g, const Edge& e) {
    const auto& b = g.bundle(e.bundle);
    if (b.mult == ExtNat(1)) return b.label;
    return b.label + "[" + std::to_string(e.index) + "]";
}

std::string to_string(const Graph& g, const Path& p) {
    if (p.edges.empty()) return g.vertex_id(p.base);
    std::string out;
    for (const auto& e : p.edges) {
        if (!out.empty()) out += '.';
        out += to_string(g, e);
    }
    return out;
}

Path parse_path(const Graph& g, std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    if (text.empty()) throw GraphError("empty path");
    if (text.find_first_of(".[") == std::string_view::npos && !g.find_bundle(text)) {
        if (auto v = g.find_vertex(text)) return Path::vertex(*v);
    }
    std::vector<Edge> edges;
    while (!text.empty()) {
        auto dot = text.find('.');
        std::string_view part = trim(text.substr(0, dot));
        text = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
        std::uint64_t index = 0;
        if (auto open = part.find('['); open != std::string_view::npos) {
            if (part.back() != ']') throw GraphError("malformed edge '" + std::string(part) + "'");
            auto digits = part.substr(open + 1, part.size() - open - 2);
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
            if (ec != std::errc() || ptr != digits.data() + digits.size())
                throw GraphError("malformed edge index in '" + std::string(part) + "'");
            part = part.substr(0, open);
        }
        Edge e{g.bundle_index(part), index};
        if (!g.is_valid(e)) throw GraphError("edge index out of range in '" + std::string(part) + "'");
        edges.push_back(e);
    }
    Path p{g.source(edges.front()), std::move(edges)};
    if (!g.is_valid(p)) throw GraphError("edges do not form a path");
    return p;
}

VertexSet parse_vertex_set(const Graph& g, std::string_view text) {
    VertexSet out;
    while (!text.empty()) {
        auto comma = text.find(',');
        auto item = text.substr(0, comma);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) out.insert(g.vertex(item));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

std::string to_string(const Graph& g, const VertexSet& s) {
    std::string out = "{";
    for (auto v : s) {
        if (out.size() > 1) out += ',';
        out += g.vertex_id(v);
    }
    return out + "}";
}

std::optional<std::vector<std::size_t>> find_isomorphism(const Graph& a, const Graph& b) {
    std::size_t n = a.vertex_count();
    if (n != b.vertex_count()) return std::nullopt;
    auto matrix = [](const Graph& g) {
        std::vector<std::vector<ExtNat>> m(g.vertex_count(), std::vector<ExtNat>(g.vertex_count()));
        for (std::size_t i = 0; i < g.bundle_count(); ++i) m[g.bundle(i).src][g.bundle(i).dst] += g.bundle(i).mult;
        return m;
    };
    auto ma = matrix(a), mb = matrix(b);
    std::vector<std::size_t> image(n);
    std::vector<bool> used(n, false);
    std::function<bool(std::size_t)> extend = [&](std::size_t i) {
        if (i == n) return true;
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j]) continue;
            image[i] = j;
            bool ok = ma[i][i] == mb[j][j];
            for (std::size_t k = 0; ok && k < i; ++k)
                ok = ma[i][k] == mb[j][image[k]] && ma[k][i] == mb[image[k]][j];
            if (!ok) continue;
            used[j] = true;
            if (extend(i + 1)) return true;
            used[j] = false;
        }
        return false;
    };
    if (!extend(0)) return std::nullopt;
    return image;
}

}  // namespace pullgraph
