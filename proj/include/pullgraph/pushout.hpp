#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pullgraph/algebra.hpp"
#include "pullgraph/functor.hpp"
#include "pullgraph/graph.hpp"
#include "pullgraph/resolution.hpp"

namespace pullgraph {

// Gluing data: x[i] is sent to vertex iota_e[i] of `e` and iota_h[i] of `h`.
struct AmalgamationData {
    std::vector<std::string> x;
    GraphPtr e;
    GraphPtr h;
    std::vector<std::size_t> iota_e;
    std::vector<std::size_t> iota_h;
};

// Parses `e1=h1,e2=h2,...` (E vertex = H vertex); X is named by the E side.
AmalgamationData parse_attachment(GraphPtr e, GraphPtr h, std::string_view spec);

// The vertex of the glued graph that an E or H vertex becomes. Vertices of E
// keep their ids, glued H vertices take the id of their E partner, and the
// other H vertices are prefixed `H:`. Bundles are prefixed `E:` and `H:`.
std::string glued_vertex_id_e(const AmalgamationData& d, std::size_t v);
std::string glued_vertex_id_h(const AmalgamationData& d, std::size_t v);
std::string glued_label_e(const std::string& label);
std::string glued_label_h(const std::string& label);

// E ⊔_X H. Requires injective maps, with the image of X consisting of sinks in
// E or in H; throws PreconditionError naming a witness otherwise.
Graph pushout_over_sinks(const AmalgamationData& d, std::string name = {});

// The functor glued1 -> glued2 that acts as `base` on bundles coming from E1
// and as the identity on bundles coming from H.
GraphFunctor extend_functor(const GraphFunctor& base, const AmalgamationData& d1, const AmalgamationData& d2,
                            GraphPtr glued1, GraphPtr glued2);

struct ExtensionCertificate {
    Bounds bounds;
    GraphPtr h;
    std::vector<std::pair<std::string, std::string>> attach;  // (E vertex, H vertex)
    GraphPtr glued1;
    GraphPtr glued2;
    std::optional<GraphFunctor> psi;
    CheckList checks;
    std::vector<std::string> witnesses;
    std::vector<std::string> corners;  // top-left, top-right, bottom-left, bottom-right

    bool verified() const { return psi.has_value() && checks.all(); }
};

const std::vector<std::string>& extension_check_names();

// Extends a pullback certificate by gluing H to E1 and E2 along `attach`.
// Throws PreconditionError if the attachment is not a total injective map
// into both graphs.
ExtensionCertificate verify_extension(const PullbackCertificate& base, GraphPtr h, std::string_view attach, Bounds bounds);

// The extended quotient C*(glued1) -> C*(F1), which kills H and everything
// outside F1.
HomDescriptor extended_quotient(const GraphPtr& glued, const GraphPtr& target, std::string name);

struct KernelDescriptorReport {
    bool agrees = true;
    std::size_t monomials_checked = 0;
    std::size_t in_kernel = 0;
    std::vector<std::string> witnesses;
};

// For every monomial of C*(glued1) within bounds, membership in the kernel of
// the extended quotient agrees with "range outside F1, or some path uses a
// bundle coming from H".
KernelDescriptorReport kernel_descriptor_check(const PullbackCertificate& base, const ExtensionCertificate& ext,
                                               Bounds bounds);

}  // namespace pullgraph
