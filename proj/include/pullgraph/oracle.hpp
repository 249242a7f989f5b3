#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pullgraph/algebra.hpp"

namespace pullgraph {

// A sparse rational matrix acting on the span of `basis`.
struct OracleMatrix {
    std::vector<std::string> basis;
    std::map<std::pair<std::size_t, std::size_t>, Rational> entries;  // (row, column)

    bool is_zero() const { return entries.empty(); }
    friend bool operator==(const OracleMatrix&, const OracleMatrix&) = default;
};

// The path-space representation of a finite acyclic graph: the basis is the
// paths ending at sinks, and S_alpha S_beta^* sends beta·mu to alpha·mu. Each
// exempt regular vertex first gets a fresh sink with one fresh edge, so the
// representation is faithful on the algebra with those vertices exempt.
// Throws AlgebraError on cyclic graphs or infinite multiplicities.
OracleMatrix faithful_rep_oracle(const AlgebraElement& a);

}  // namespace pullgraph
