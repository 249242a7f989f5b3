#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"
#include "pullgraph/graph.hpp"

namespace pullgraph {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Line-based text format:
//   graph <name>
//   vertex <id>
//   edge <label>: <src> -> <dst> x <mult>     (mult: positive integer or `inf`)
// `#` starts a comment. Any other directive is an error.
Graph parse_graph(std::string_view text);
std::string serialize_graph(const Graph& g);

// Graphviz rendering; infinite bundles are a single edge labelled "(inf)".
std::string export_dot(const Graph& g);

nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

std::string read_file(const std::string& path);

}  // namespace pullgraph
