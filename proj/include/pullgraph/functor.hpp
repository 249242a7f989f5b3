#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pullgraph/graph.hpp"

namespace pullgraph {

using GraphPtr = std::shared_ptr<const Graph>;

inline GraphPtr share(Graph g) { return std::make_shared<const Graph>(std::move(g)); }

class FunctorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One factor of an explicit edge image. For source edge e[k]:
//   SameIndex  `label`     -> label[k]
//   Fixed      `label[j]`  -> label[j]
//   Power      `label^k`   -> label[0] repeated k times (self-loops only)
struct Factor {
    enum class Kind { SameIndex, Fixed, Power };
    std::size_t bundle = 0;
    Kind kind = Kind::SameIndex;
    std::uint64_t index = 0;

    friend bool operator==(const Factor&, const Factor&) = default;
};

struct ExplicitTemplate {
    std::vector<Factor> factors;
    friend bool operator==(const ExplicitTemplate&, const ExplicitTemplate&) = default;
};

// Edge k goes to the k-th path of the form (self-loops at s(final))^j · final[i],
// ordered by length, then labels, then indices.
struct CanonicalResolution {
    std::size_t final_bundle = 0;
    friend bool operator==(const CanonicalResolution&, const CanonicalResolution&) = default;
};

using EdgeRule = std::variant<ExplicitTemplate, CanonicalResolution>;

// A functor between path categories: vertices to vertices, edges to paths.
// Construction does not check functoriality; see validate().
class GraphFunctor {
public:
    GraphFunctor(std::string name, GraphPtr source, GraphPtr target, std::vector<std::size_t> vertex_map,
                 std::vector<EdgeRule> rules);

    static GraphFunctor identity(GraphPtr g);

    const std::string& name() const { return name_; }
    const Graph& source() const { return *source_; }
    const Graph& target() const { return *target_; }
    const GraphPtr& source_ptr() const { return source_; }
    const GraphPtr& target_ptr() const { return target_; }
    std::size_t map_vertex(std::size_t v) const { return vertex_map_.at(v); }
    const std::vector<std::size_t>& vertex_map() const { return vertex_map_; }
    const EdgeRule& rule(std::size_t bundle) const { return rules_.at(bundle); }
    const std::map<Edge, Path>& overrides() const { return overrides_; }

    // Replaces the image of a single edge.
    void set_override(const Edge& e, Path image);

    Path eval(const Edge& e) const;
    Path eval(const Path& p) const;

    // The unique source path mapping onto `p`, if any.
    std::optional<Path> decode(const Path& p) const;

    // Functoriality on generators: each edge image (index <= max_index) is a
    // valid target path between the images of its endpoints.
    std::vector<std::string> validate(std::uint64_t max_index) const;

    friend bool operator==(const GraphFunctor& a, const GraphFunctor& b);

private:
    using MatchContinuation = std::function<bool(std::size_t pos, std::optional<std::uint64_t> k)>;

    std::optional<std::uint64_t> canonical_rank(const CanonicalResolution& rule, const Path& target,
                                                std::size_t& pos) const;
    bool match_factors(const ExplicitTemplate& t, std::size_t factor, const Path& target, std::size_t pos,
                       std::optional<std::uint64_t> k, const MatchContinuation& cont) const;
    bool decode_from(std::size_t vertex, const Path& target, std::size_t pos, std::vector<Edge>& out) const;
    std::vector<Edge> self_loops(std::size_t target_vertex) const;

    std::string name_;
    GraphPtr source_;
    GraphPtr target_;
    std::vector<std::size_t> vertex_map_;
    std::vector<EdgeRule> rules_;
    std::map<Edge, Path> overrides_;
};

// Restriction-corestriction to subgraphs whose bundles are identified with
// the originals by label.
GraphFunctor restrict_functor(const GraphFunctor& f, GraphPtr sub_source, GraphPtr sub_target);

struct FunctorConditionsReport {
    bool reflects_prolongation = true;
    bool regular_bijection = true;
    std::size_t paths_checked = 0;
    std::vector<std::string> witnesses;
};

// The two conditions under which a path functor induces a *-homomorphism:
//  - f(a) <= f(b) implies a <= b, over all source paths within bounds;
//  - at every regular source vertex, edges go bijectively onto the
//    out-edges of the image vertex (checked exactly).
FunctorConditionsReport check_functor_conditions(const GraphFunctor& f, std::size_t max_len, std::uint64_t max_index);

// Text forms of rules, e.g. `t1^k t2`, `e[2]`, `canonical t2`.
std::string rule_to_string(const Graph& target, const EdgeRule& rule);
EdgeRule parse_rule(const Graph& source, std::size_t source_bundle, const Graph& target, std::string_view text);

// Functor file:
//   functor <name>: <source graph> -> <target graph>
//   vertex <src id> -> <dst id>            (optional; default matches ids)
//   map <bundle>[k] -> <factor> ...        (rule for every edge of the bundle)
//   map <bundle>[3] -> <factor> ...        (override for one edge)
// `resolve_graph` looks graphs up by name.
GraphFunctor parse_functor(std::string_view text, const std::function<GraphPtr(const std::string&)>& resolve_graph);
std::string serialize_functor(const GraphFunctor& f);

}  // namespace pullgraph
