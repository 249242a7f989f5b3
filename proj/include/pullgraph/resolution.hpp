#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pullgraph/algebra.hpp"
#include "pullgraph/functor.hpp"
#include "pullgraph/graph.hpp"
#include "pullgraph/subsets.hpp"

namespace pullgraph {

struct Bounds {
    std::size_t max_len = 6;
    std::uint64_t max_index = 4;

    friend bool operator==(const Bounds&, const Bounds&) = default;
};

// Named boolean outcomes, kept in insertion order.
class CheckList {
public:
    void set(const std::string& name, bool value);
    bool get(const std::string& name) const;  // throws std::out_of_range
    bool contains(const std::string& name) const;
    bool all() const;
    const std::vector<std::pair<std::string, bool>>& entries() const { return entries_; }

    friend bool operator==(const CheckList&, const CheckList&) = default;

private:
    std::vector<std::pair<std::string, bool>> entries_;
};

// Number of pointed paths v -> w that do not split into two pointed paths of
// positive length. Such a path is a run of self-loops at v followed by one
// edge v -> w, so the count is m(v, w) when v has no self-loops, infinite when
// it has self-loops and m(v, w) > 0, and zero when v == w.
ExtNat irreducible_pointed_count(const Graph& g, std::size_t v, std::size_t w);
ExtNat irreducible_pointed_count(const Graph& g, std::string_view v, std::string_view w);

struct Resolution {
    GraphPtr e2;
    GraphPtr f2;
    GraphPtr e1;
    GraphPtr f1;
    GraphFunctor functor;   // E1 -> E2
    GraphFunctor restricted;  // F1 -> F2
    VertexSet f2_vertices;  // as vertices of E2 (and of E1, which has the same vertices)
};

// The induced subgraph of `g` on `s`, named `<g>_sub`.
Graph subgraph_on(const Graph& g, const VertexSet& s);

// Builds E1, F1 and the canonical functor without checking the hypotheses.
// Every non-loop bundle b: v -> w of E2 becomes a bundle of E1 with the same
// label, of multiplicity m(b) if v has no self-loops and infinite otherwise.
// Throws PreconditionError if a vertex with self-loops has infinitely many
// self-loops or an infinite outgoing bundle (no canonical enumeration exists).
Resolution build_resolution(GraphPtr e2, const VertexSet& f2);

// As build_resolution, after checking that F2 is admissible in E2 and that E2
// has no self-loops outside F2. Throws PreconditionError with a witness.
Resolution resolve(GraphPtr e2, const VertexSet& f2);

struct PullbackCertificate {
    GraphPtr e2;
    VertexSet f2_vertices;
    Bounds bounds;
    std::optional<Resolution> resolution;  // absent if construction failed
    CheckList checks;
    bool unital = false;
    bool e1_af = false;
    std::vector<std::string> witnesses;

    bool verified() const { return resolution.has_value() && checks.all(); }
};

// Names of the checks, in report order.
const std::vector<std::string>& pullback_check_names();

PullbackCertificate verify_pullback(GraphPtr e2, const VertexSet& f2, Bounds bounds = {});

// The two quotient maps and the induced maps of the pullback square:
// C*(E1) -> C*(F1), C*(E2) -> C*(F2), f_*: C*(E1) -> C*(E2) and its restriction.
struct PullbackSquare {
    HomDescriptor pi1;
    HomDescriptor pi2;
    HomDescriptor f_star;
    HomDescriptor f_restricted_star;
};

PullbackSquare pullback_square(const Resolution& r);

struct KernelInclusionReport {
    bool holds = true;
    std::size_t monomials_checked = 0;
    std::vector<std::string> witnesses;
};

// Every S_gamma S_delta^* of E2 with range outside F2 and paths within bounds
// lies in the kernel of C*(E2) -> C*(F2) and has an explicit preimage under
// f_* whose image is the monomial itself.
KernelInclusionReport check_kernel_inclusion(const Resolution& r, std::size_t max_len, std::uint64_t max_index);

}  // namespace pullgraph
