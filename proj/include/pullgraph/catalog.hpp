#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pullgraph/graph.hpp"

namespace pullgraph {

class CatalogError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CatalogEntry {
    std::string key;
    std::string params;       // e.g. "n,m[,i1..in]"; empty for fixed graphs
    std::string provenance;   // what the graph presents
    std::function<Graph(const std::vector<std::uint64_t>&)> build;
};

const std::vector<CatalogEntry>& catalog_entries();

// `key` or `key:p1,p2,...`, e.g. `cuntz:2`, `rnm:2,2,1,1`.
Graph catalog_get(std::string_view spec);
Graph catalog_get(std::string_view key, const std::vector<std::uint64_t>& params);

// One instance of every entry, plus a few larger parameters.
std::vector<std::string> catalog_sample_specs();

}  // namespace pullgraph
