#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pullgraph/functor.hpp"
#include "pullgraph/graph.hpp"

namespace pullgraph {

using Rational = mpq_class;

class AlgebraError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// S_alpha S_beta^*, with range(alpha) == range(beta). P_v is (v, v); S_e is
// (e, range(e)).
struct Monomial {
    Path alpha;
    Path beta;

    friend auto operator<=>(const Monomial&, const Monomial&) = default;
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

using Terms = std::map<Monomial, Rational>;

// The Leavitt path algebra of a graph, with the data the normal form needs.
// At every regular vertex that is not exempt, the largest outgoing edge in
// canonical order is "special": S_a S_e S_e^* S_b^* with e special rewrites to
// S_a S_b^* minus the sum over the other out-edges.
class Algebra {
public:
    explicit Algebra(GraphPtr g, VertexSet extra_exempt = {});

    const Graph& graph() const { return *graph_; }
    const GraphPtr& graph_ptr() const { return graph_; }
    bool exempt(std::size_t v) const { return exempt_.at(v); }
    const std::vector<bool>& exempt_mask() const { return exempt_; }
    const std::optional<Edge>& special_edge(std::size_t v) const { return special_.at(v); }
    const std::vector<Edge>& out_edges(std::size_t v) const { return out_edges_.at(v); }

    bool compatible(const Algebra& other) const;

private:
    GraphPtr graph_;
    std::vector<bool> exempt_;
    std::vector<std::optional<Edge>> special_;
    std::vector<std::vector<Edge>> out_edges_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

inline AlgebraPtr make_algebra(GraphPtr g, VertexSet extra_exempt = {}) {
    return std::make_shared<const Algebra>(std::move(g), std::move(extra_exempt));
}

// Rewrites `terms` to normal form. With an engine, redexes are processed in a
// random order; the result does not depend on it.
Terms normalize_terms(const Algebra& algebra, Terms terms, std::mt19937_64* shuffle = nullptr);

bool is_normal(const Algebra& algebra, const Monomial& m);

// A finite rational combination of monomials, always in normal form.
class AlgebraElement {
public:
    explicit AlgebraElement(AlgebraPtr algebra);
    AlgebraElement(AlgebraPtr algebra, Terms terms);

    static AlgebraElement vertex(AlgebraPtr a, std::size_t v);
    static AlgebraElement edge(AlgebraPtr a, const Path& p);       // S_p
    static AlgebraElement edge_star(AlgebraPtr a, const Path& p);  // S_p^*
    static AlgebraElement monomial(AlgebraPtr a, const Path& alpha, const Path& beta, Rational coefficient = 1);

    const Algebra& algebra() const { return *algebra_; }
    const AlgebraPtr& algebra_ptr() const { return algebra_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    AlgebraElement& operator+=(const AlgebraElement& other);
    AlgebraElement& operator-=(const AlgebraElement& other);
    AlgebraElement& operator*=(const Rational& scalar);

    friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
    friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
    friend AlgebraElement operator*(AlgebraElement a, const Rational& s) { return a *= s; }
    friend AlgebraElement operator*(const Rational& s, AlgebraElement a) { return a *= s; }
    friend bool operator==(const AlgebraElement& a, const AlgebraElement& b);

private:
    void check_same(const AlgebraElement& other) const;

    AlgebraPtr algebra_;
    Terms terms_;
};

// Product of two monomials before normalization; nullopt is zero.
std::optional<Monomial> multiply_monomials(const Graph& g, const Monomial& a, const Monomial& b);

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement star(const AlgebraElement& a);
// Re-normalizes; elements are already normal, so this is the identity.
AlgebraElement normalize(const AlgebraElement& a);

std::string to_string(const Graph& g, const Monomial& m);
std::string to_string(const AlgebraElement& a);

// A *-homomorphism between graph algebras, described on generators: either
// induced by a path functor, or by a generator map that may send vertices and
// edges to zero (quotient maps and their extensions).
class HomDescriptor {
public:
    struct GeneratorMap {
        std::vector<std::optional<std::size_t>> vertices;
        std::vector<std::optional<std::size_t>> bundles;
    };

    static HomDescriptor induced(std::string name, GraphFunctor f, AlgebraPtr domain, AlgebraPtr codomain);
    static HomDescriptor induced(std::string name, GraphFunctor f);
    static HomDescriptor generator_map(std::string name, GeneratorMap map, AlgebraPtr domain, AlgebraPtr codomain);

    const std::string& name() const { return name_; }
    const AlgebraPtr& domain() const { return domain_; }
    const AlgebraPtr& codomain() const { return codomain_; }
    const GraphFunctor* functor() const { return std::get_if<GraphFunctor>(&rule_); }

    std::optional<Path> map_path(const Path& p) const;
    std::optional<Monomial> map_monomial(const Monomial& m) const;
    AlgebraElement apply(const AlgebraElement& a) const;

private:
    HomDescriptor(std::string name, std::variant<GraphFunctor, GeneratorMap> rule, AlgebraPtr domain, AlgebraPtr codomain);

    std::string name_;
    std::variant<GraphFunctor, GeneratorMap> rule_;
    AlgebraPtr domain_;
    AlgebraPtr codomain_;
};

AlgebraElement apply_hom(const HomDescriptor& h, const AlgebraElement& a);

// Quotient by the ideal of a hereditary set: generators are matched with the
// codomain graph by vertex id and bundle label; anything missing goes to zero.
HomDescriptor quotient_hom(std::string name, AlgebraPtr domain, AlgebraPtr codomain);
// Same, onto a subgraph identified through an explicit inclusion sub -> domain.
HomDescriptor quotient_hom_onto(std::string name, AlgebraPtr domain, AlgebraPtr sub,
                                const std::vector<std::size_t>& vertex_map, const std::vector<std::size_t>& bundle_map);

struct RelationsReport {
    bool orthogonal_projections = true;
    bool edge_relation = true;   // S_e^* S_f = [e == f] P_r(e)
    bool sum_relation = true;    // sum over s^-1(v) of S_e S_e^* = P_v at regular v
    bool range_bound = true;     // P_s(e) S_e S_e^* = S_e S_e^*
    std::size_t checks = 0;
    std::vector<std::string> witnesses;

    bool all() const { return orthogonal_projections && edge_relation && sum_relation && range_bound; }
};

// Evaluates the images of the defining relations on all generators with edge
// index <= max_index.
RelationsReport check_relations_preserved(const HomDescriptor& h, std::uint64_t max_index);

struct CommutesReport {
    bool commutes = true;
    std::size_t generators_checked = 0;
    std::vector<std::string> witnesses;
};

// Square   top -> right -> bottom_right   vs   top -> left -> bottom_left,
// i.e. bottom_right(right(x)) == bottom_left(left(x)) on generators x.
CommutesReport commutes(const HomDescriptor& left, const HomDescriptor& right, const HomDescriptor& bottom_left,
                        const HomDescriptor& bottom_right, std::uint64_t max_index);

// For S_gamma S_delta^* whose range lies outside `kept` (so in the kernel of
// the quotient onto `kept`), the monomial S_a S_b^* with f(a) = gamma and
// f(b) = delta. Throws AlgebraError if the range lies in `kept`.
std::optional<Monomial> kernel_preimage(const GraphFunctor& f, const VertexSet& kept, const Monomial& m);

}  // namespace pullgraph
