#pragma once

#include <stdexcept>
#include <string_view>

#include "pullgraph/algebra.hpp"

namespace pullgraph {

class ExpressionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parses and evaluates an algebra expression:
//   P(v)  S(path)  S*(path)  rationals such as 3/2  + - *  parentheses
// with paths written `label[idx].label...`. Products may also be written by
// juxtaposition, as in `S(e)S*(f)`, so printed elements parse back.
AlgebraElement parse_expression(const AlgebraPtr& algebra, std::string_view text);

}  // namespace pullgraph
