#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pullgraph/graph.hpp"

namespace pullgraph {

// Raised when an operation's hypotheses on a vertex set or inclusion fail.
// The message names the failing condition and a witness.
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SubsetCheck {
    bool holds = true;
    std::optional<std::size_t> witness;  // a bundle for heredity, a vertex otherwise

    explicit operator bool() const { return holds; }
};

SubsetCheck is_hereditary(const Graph& g, const VertexSet& h);
VertexSet hereditary_closure(const Graph& g, const VertexSet& h);
SubsetCheck is_saturated(const Graph& g, const VertexSet& h);
// No vertex emits infinitely many edges into `h` and finitely many, but not
// zero, edges outside `h`.
SubsetCheck emission_condition(const Graph& g, const VertexSet& h);

VertexSet complement(const Graph& g, const VertexSet& s);

// Vertices of `s` (in graph order) with every bundle whose ends both lie in `s`.
Graph induced_subgraph(const Graph& g, const VertexSet& s, std::string name);

// An injective graph morphism sub -> ambient. Bundle b of `sub` goes to
// bundle `bundle_map[b]` of `ambient`, index by index.
struct GraphInclusion {
    std::vector<std::size_t> vertex_map;
    std::vector<std::size_t> bundle_map;
};

// Parses `a=b,c=d` (sub id = ambient id). An empty spec maps vertices with
// equal ids.
std::vector<std::size_t> parse_vertex_map(const Graph& sub, const Graph& ambient, std::string_view spec);

// Completes a vertex map to an inclusion: bundles are matched by label when
// the label exists in `ambient` with matching endpoints, otherwise with the
// first unused ambient bundle between the image endpoints. Throws
// PreconditionError if the map is not injective or no compatible bundle exists.
GraphInclusion infer_inclusion(const Graph& sub, const Graph& ambient, const std::vector<std::size_t>& vertex_map);

struct AdmissibilityReport {
    bool a1_hereditary = false;
    bool a1_saturated = false;
    bool a2_edge_condition = false;
    bool a3_emission_condition = false;
    std::vector<std::string> witnesses;

    bool admissible() const { return a1_hereditary && a1_saturated && a2_edge_condition && a3_emission_condition; }
};

AdmissibilityReport check_admissible(const Graph& sub, const Graph& ambient, const GraphInclusion& inclusion);
AdmissibilityReport check_admissible(const Graph& sub, const Graph& ambient, const std::vector<std::size_t>& vertex_map);

// E/H: vertices outside H and the bundles whose range lies outside H. Requires
// H hereditary, saturated and the emission condition; throws PreconditionError.
Graph quotient_graph(const Graph& g, const VertexSet& h);

// Whether quotienting `ambient` by the complement of the image reproduces
// `sub` (equal multiplicity matrices under the vertex map). Throws
// PreconditionError if the inclusion is not admissible.
bool check_quotient_iso(const Graph& sub, const Graph& ambient, const std::vector<std::size_t>& vertex_map);

}  // namespace pullgraph
