#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pullgraph/ext_nat.hpp"

namespace pullgraph {

using VertexId = std::string;
using VertexSet = std::set<std::size_t>;

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unvalidated presentation of a graph, as read from a file or built by hand.
struct BundleData {
    std::string label;
    VertexId src;
    VertexId dst;
    ExtNat mult;

    friend bool operator==(const BundleData&, const BundleData&) = default;
};

struct GraphData {
    std::string name;
    std::vector<VertexId> vertices;
    std::vector<BundleData> bundles;

    friend bool operator==(const GraphData&, const GraphData&) = default;
};

enum class ViolationKind { InvalidIdentifier, DuplicateVertex, DuplicateLabel, UnknownVertex, ZeroMultiplicity };

struct Violation {
    ViolationKind kind;
    std::string location;
    std::string message;
};

const char* to_string(ViolationKind kind);

std::vector<Violation> validate_graph(const GraphData& data);

// A bundle is a family of parallel edges src -> dst; `mult` may be infinite.
struct Bundle {
    std::string label;
    std::size_t src = 0;
    std::size_t dst = 0;
    ExtNat mult;

    bool is_loop() const { return src == dst; }
    friend bool operator==(const Bundle&, const Bundle&) = default;
};

// A concrete edge: member `index` of bundle `bundle`.
struct Edge {
    std::size_t bundle = 0;
    std::uint64_t index = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// A finite path. An empty edge sequence denotes the vertex `base` itself.
struct Path {
    std::size_t base = 0;
    std::vector<Edge> edges;

    static Path vertex(std::size_t v) { return Path{v, {}}; }

    std::size_t length() const { return edges.size(); }
    bool is_vertex() const { return edges.empty(); }

    friend bool operator==(const Path&, const Path&) = default;
    // Canonical order: length, then base vertex, then edges lexicographically.
    // Bundles are stored in label order, so this is (length, label, index).
    friend std::strong_ordering operator<=>(const Path& a, const Path& b) {
        if (auto c = a.edges.size() <=> b.edges.size(); c != 0) return c;
        if (auto c = a.base <=> b.base; c != 0) return c;
        return a.edges <=> b.edges;
    }
};

// Validated, indexed directed multigraph. Bundles are kept sorted by label,
// so bundle indices follow the canonical label order.
class Graph {
public:
    Graph() = default;
    explicit Graph(GraphData data);

    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    std::size_t vertex_count() const { return vertices_.size(); }
    const VertexId& vertex_id(std::size_t v) const { return vertices_.at(v); }
    std::optional<std::size_t> find_vertex(std::string_view id) const;
    std::size_t vertex(std::string_view id) const;  // throws GraphError

    std::size_t bundle_count() const { return bundles_.size(); }
    const Bundle& bundle(std::size_t b) const { return bundles_.at(b); }
    std::optional<std::size_t> find_bundle(std::string_view label) const;
    std::size_t bundle_index(std::string_view label) const;  // throws GraphError

    std::span<const std::size_t> out_bundles(std::size_t v) const { return out_.at(v); }
    std::span<const std::size_t> in_bundles(std::size_t v) const { return in_.at(v); }

    ExtNat multiplicity(std::size_t v, std::size_t w) const;
    ExtNat out_multiplicity(std::size_t v) const;

    std::size_t source(const Edge& e) const { return bundles_.at(e.bundle).src; }
    std::size_t range(const Edge& e) const { return bundles_.at(e.bundle).dst; }
    std::size_t source(const Path& p) const { return p.base; }
    std::size_t range(const Path& p) const { return p.edges.empty() ? p.base : range(p.edges.back()); }

    bool is_valid(const Edge& e) const;
    bool is_valid(const Path& p) const;

    GraphData data() const;

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.name_ == b.name_ && a.vertices_ == b.vertices_ && a.bundles_ == b.bundles_;
    }

private:
    std::string name_;
    std::vector<VertexId> vertices_;
    std::vector<Bundle> bundles_;
    std::unordered_map<std::string, std::size_t> vertex_index_;
    std::unordered_map<std::string, std::size_t> bundle_index_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<std::vector<std::size_t>> in_;
};

// Same vertices and bundles, ignoring the graph name.
bool same_structure(const Graph& a, const Graph& b);

enum class VertexClass { Sink, Regular, InfiniteEmitter };
const char* to_string(VertexClass c);

VertexClass classify_vertex(const Graph& g, std::size_t v);
VertexClass classify_vertex(const Graph& g, std::string_view v);

// Paths of length <= max_len starting at `from` (optionally ending at `to`),
// with every edge index <= max_index, in canonical order.
std::vector<Path> enumerate_paths(const Graph& g, std::size_t from, std::optional<std::size_t> to,
                                  std::size_t max_len, std::uint64_t max_index);
std::vector<Path> enumerate_paths(const Graph& g, std::string_view from, std::optional<std::string_view> to,
                                  std::size_t max_len, std::uint64_t max_index);
// Same, from every vertex in turn.
std::vector<Path> enumerate_all_paths(const Graph& g, std::size_t max_len, std::uint64_t max_index);

enum class PrefixRelation { Equal, APrefixOfB, BPrefixOfA, Incomparable };
const char* to_string(PrefixRelation r);

PrefixRelation prolongation_compare(const Path& a, const Path& b);

// Nonempty and the final edge is not a self-loop.
bool is_pointed(const Graph& g, const Path& p);

bool loop_free(const Graph& g);
std::vector<std::size_t> short_loops_at(const Graph& g, const VertexSet& s);

// Concatenation a·b; throws GraphError unless range(a) == source(b).
Path concat(const Graph& g, const Path& a, const Path& b);

// Vertices reachable from `start` (inclusive) by directed paths.
VertexSet reachable_from(const Graph& g, const VertexSet& start);

// Text forms: a vertex id, or `label[idx].label[idx]...` where `[idx]` is
// optional (default 0) and printed only for bundles of multiplicity != 1.
std::string to_string(const Graph& g, const Edge& e);
std::string to_string(const Graph& g, const Path& p);
Path parse_path(const Graph& g, std::string_view text);

VertexSet parse_vertex_set(const Graph& g, std::string_view comma_separated);
std::string to_string(const Graph& g, const VertexSet& s);

// A vertex bijection a -> b under which the multiplicity matrices agree.
std::optional<std::vector<std::size_t>> find_isomorphism(const Graph& a, const Graph& b);

}  // namespace pullgraph
