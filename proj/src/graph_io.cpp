#include "pullgraph/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace pullgraph {

namespace {

std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

ExtNat parse_mult(std::size_t line, const std::string& text) {
    if (text == "inf") return ExtNat::infinity();
    std::uint64_t n = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (ec != std::errc() || ptr != text.data() + text.size() || n == 0)
        throw ParseError(line, "multiplicity must be a positive integer or 'inf', got '" + text + "'");
    return ExtNat(n);
}

}  // namespace

Graph parse_graph(std::string_view text) {
    GraphData data;
    bool have_name = false;
    std::map<std::string, std::size_t> vertex_line, bundle_line;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        auto tok = split_ws(raw);
        if (tok.empty()) continue;
        const auto& directive = tok[0];
        if (directive == "graph") {
            if (tok.size() != 2) throw ParseError(line_no, "expected 'graph <name>'");
            if (have_name) throw ParseError(line_no, "duplicate 'graph' directive");
            data.name = tok[1];
            have_name = true;
        } else if (directive == "vertex") {
            if (tok.size() != 2) throw ParseError(line_no, "expected 'vertex <id>'");
            if (vertex_line.contains(tok[1])) throw ParseError(line_no, "duplicate vertex '" + tok[1] + "'");
            vertex_line[tok[1]] = line_no;
            data.vertices.push_back(tok[1]);
        } else if (directive == "edge") {
            if (tok.size() != 7 || tok[1].size() < 2 || tok[1].back() != ':' || tok[3] != "->" || tok[5] != "x")
                throw ParseError(line_no, "expected 'edge <label>: <src> -> <dst> x <mult>'");
            std::string label = tok[1].substr(0, tok[1].size() - 1);
            if (bundle_line.contains(label)) throw ParseError(line_no, "duplicate edge label '" + label + "'");
            bundle_line[label] = line_no;
            data.bundles.push_back({label, tok[2], tok[4], parse_mult(line_no, tok[6])});
        } else {
            throw ParseError(line_no, "unknown directive '" + directive + "'");
        }
    }
    if (!have_name) throw ParseError(line_no == 0 ? 1 : line_no, "missing 'graph <name>' directive");
    for (const auto& b : data.bundles) {
        for (const auto& end : {b.src, b.dst})
            if (!vertex_line.contains(end))
                throw ParseError(bundle_line[b.label], "unknown vertex '" + end + "' in edge '" + b.label + "'");
    }
    if (auto violations = validate_graph(data); !violations.empty()) {
        const auto& v = violations.front();
        throw ParseError(line_no, v.location + ": " + v.message);
    }
    return Graph(std::move(data));
}

std::string serialize_graph(const Graph& g) {
    std::ostringstream out;
    out << "graph " << g.name() << '\n';
    for (std::size_t v = 0; v < g.vertex_count(); ++v) out << "vertex " << g.vertex_id(v) << '\n';
    for (std::size_t b = 0; b < g.bundle_count(); ++b) {
        const auto& bundle = g.bundle(b);
        out << "edge " << bundle.label << ": " << g.vertex_id(bundle.src) << " -> " << g.vertex_id(bundle.dst)
            << " x " << bundle.mult.to_string() << '\n';
    }
    return out.str();
}

std::string export_dot(const Graph& g) {
    auto quote = [](const std::string& s) {
        std::string out = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        return out + "\"";
    };
    std::ostringstream out;
    out << "digraph " << quote(g.name()) << " {\n";
    for (std::size_t v = 0; v < g.vertex_count(); ++v) out << "  " << quote(g.vertex_id(v)) << ";\n";
    for (std::size_t b = 0; b < g.bundle_count(); ++b) {
        const auto& bundle = g.bundle(b);
        std::string label = bundle.mult.is_infinite() ? "(inf)" : bundle.mult.to_string();
        out << "  " << quote(g.vertex_id(bundle.src)) << " -> " << quote(g.vertex_id(bundle.dst))
            << " [id=" << quote(bundle.label) << ", label=" << quote(label) << "];\n";
    }
    out << "}\n";
    return out.str();
}

nlohmann::json graph_to_json(const Graph& g) {
    nlohmann::json bundles = nlohmann::json::array();
    for (std::size_t b = 0; b < g.bundle_count(); ++b) {
        const auto& bundle = g.bundle(b);
        nlohmann::json mult = bundle.mult.is_infinite() ? nlohmann::json("inf") : nlohmann::json(bundle.mult.value());
        bundles.push_back({{"label", bundle.label},
                           {"src", g.vertex_id(bundle.src)},
                           {"dst", g.vertex_id(bundle.dst)},
                           {"mult", mult}});
    }
    nlohmann::json vertices = nlohmann::json::array();
    for (std::size_t v = 0; v < g.vertex_count(); ++v) vertices.push_back(g.vertex_id(v));
    return {{"name", g.name()}, {"vertices", vertices}, {"bundles", bundles}};
}

Graph graph_from_json(const nlohmann::json& j) {
    GraphData data;
    data.name = j.at("name").get<std::string>();
    for (const auto& v : j.at("vertices")) data.vertices.push_back(v.get<std::string>());
    for (const auto& b : j.at("bundles")) {
        const auto& m = b.at("mult");
        ExtNat mult = m.is_string() ? (m.get<std::string>() == "inf" ? ExtNat::infinity()
                                                                       : throw GraphError("bad multiplicity"))
                                    : ExtNat(m.get<std::uint64_t>());
        data.bundles.push_back({b.at("label").get<std::string>(), b.at("src").get<std::string>(),
                                b.at("dst").get<std::string>(), mult});
    }
    return Graph(std::move(data));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace pullgraph
