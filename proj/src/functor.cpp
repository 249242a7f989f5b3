#include "pullgraph/functor.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

namespace pullgraph {

namespace {

// Saturating multiply; UINT64_MAX stands for "too large to matter".
std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
    return a * b;
}

std::uint64_t add_sat(std::uint64_t a, std::uint64_t b) { return a > UINT64_MAX - b ? UINT64_MAX : a + b; }

std::vector<std::string> tokens(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::uint64_t parse_index(std::string_view digits, std::string_view context) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size())
        throw FunctorError("malformed index in '" + std::string(context) + "'");
    return v;
}

}  // namespace

GraphFunctor::GraphFunctor(std::string name, GraphPtr source, GraphPtr target, std::vector<std::size_t> vertex_map,
                           std::vector<EdgeRule> rules)
    : name_(std::move(name)),
      source_(std::move(source)),
      target_(std::move(target)),
      vertex_map_(std::move(vertex_map)),
      rules_(std::move(rules)) {
    if (!source_ || !target_) throw FunctorError("functor needs source and target graphs");
    if (vertex_map_.size() != source_->vertex_count()) throw FunctorError("vertex map size mismatch");
    if (rules_.size() != source_->bundle_count()) throw FunctorError("one edge rule per source bundle required");
    for (auto v : vertex_map_)
        if (v >= target_->vertex_count()) throw FunctorError("vertex map leaves the target graph");
    for (const auto& rule : rules_) {
        if (const auto* t = std::get_if<ExplicitTemplate>(&rule)) {
            for (const auto& f : t->factors)
                if (f.bundle >= target_->bundle_count()) throw FunctorError("template refers to unknown target bundle");
        } else if (std::get<CanonicalResolution>(rule).final_bundle >= target_->bundle_count()) {
            throw FunctorError("canonical rule refers to unknown target bundle");
        }
    }
}

GraphFunctor GraphFunctor::identity(GraphPtr g) {
    std::vector<std::size_t> vmap(g->vertex_count());
    for (std::size_t v = 0; v < vmap.size(); ++v) vmap[v] = v;
    std::vector<EdgeRule> rules;
    for (std::size_t b = 0; b < g->bundle_count(); ++b)
        rules.emplace_back(ExplicitTemplate{{Factor{b, Factor::Kind::SameIndex, 0}}});
    return GraphFunctor("id_" + g->name(), g, g, std::move(vmap), std::move(rules));
}

void GraphFunctor::set_override(const Edge& e, Path image) {
    if (!source_->is_valid(e)) throw FunctorError("override for invalid source edge");
    overrides_[e] = std::move(image);
}

std::vector<Edge> GraphFunctor::self_loops(std::size_t v) const {
    std::vector<Edge> loops;
    for (auto b : target_->out_bundles(v)) {
        const auto& bundle = target_->bundle(b);
        if (!bundle.is_loop()) continue;
        if (bundle.mult.is_infinite())
            throw FunctorError("canonical enumeration undefined: infinitely many self-loops at '" +
                               target_->vertex_id(v) + "'");
        for (std::uint64_t i = 0; i < bundle.mult.value(); ++i) loops.push_back({b, i});
    }
    return loops;
}

Path GraphFunctor::eval(const Edge& e) const {
    if (!source_->is_valid(e)) throw FunctorError("invalid source edge");
    if (auto it = overrides_.find(e); it != overrides_.end()) return it->second;
    const std::uint64_t k = e.index;
    const auto& rule = rules_[e.bundle];
    if (const auto* t = std::get_if<ExplicitTemplate>(&rule)) {
        Path out = Path::vertex(vertex_map_[source_->bundle(e.bundle).src]);
        for (const auto& f : t->factors) {
            switch (f.kind) {
                case Factor::Kind::SameIndex: out.edges.push_back({f.bundle, k}); break;
                case Factor::Kind::Fixed: out.edges.push_back({f.bundle, f.index}); break;
                case Factor::Kind::Power:
                    for (std::uint64_t i = 0; i < k; ++i) out.edges.push_back({f.bundle, f.index});
                    break;
            }
        }
        return out;
    }
    const auto& canonical = std::get<CanonicalResolution>(rule);
    const auto& final_bundle = target_->bundle(canonical.final_bundle);
    auto loops = self_loops(final_bundle.src);
    Path out = Path::vertex(final_bundle.src);
    if (loops.empty()) {
        if (!final_bundle.mult.admits_index(k)) throw FunctorError("canonical index out of range");
        out.edges.push_back({canonical.final_bundle, k});
        return out;
    }
    if (final_bundle.mult.is_infinite())
        throw FunctorError("canonical enumeration undefined: infinite bundle '" + final_bundle.label +
                           "' leaves a vertex with self-loops");
    const std::uint64_t m = final_bundle.mult.value();
    const std::uint64_t l = loops.size();
    std::uint64_t rem = k;
    std::uint64_t level = m;
    std::size_t depth = 0;
    while (rem >= level) {
        rem -= level;
        level = mul_sat(level, l);
        ++depth;
    }
    std::uint64_t digits = rem / m;
    std::vector<Edge> prefix(depth);
    for (std::size_t i = depth; i-- > 0;) {
        prefix[i] = loops[digits % l];
        digits /= l;
    }
    out.edges = std::move(prefix);
    out.edges.push_back({canonical.final_bundle, rem % m});
    return out;
}

Path GraphFunctor::eval(const Path& p) const {
    if (!source_->is_valid(p)) throw FunctorError("invalid source path");
    Path out = Path::vertex(vertex_map_[p.base]);
    for (const auto& e : p.edges) {
        Path image = eval(e);
        out.edges.insert(out.edges.end(), image.edges.begin(), image.edges.end());
    }
    return out;
}

std::optional<std::uint64_t> GraphFunctor::canonical_rank(const CanonicalResolution& rule, const Path& target,
                                                          std::size_t& pos) const {
    const auto& final_bundle = target_->bundle(rule.final_bundle);
    std::size_t at = pos == 0 ? target.base : target_->range(target.edges[pos - 1]);
    if (at != final_bundle.src) return std::nullopt;
    auto loops = self_loops(at);
    std::uint64_t digits = 0;
    std::size_t i = pos;
    std::size_t depth = 0;
    for (; i < target.edges.size() && target_->bundle(target.edges[i].bundle).is_loop(); ++i, ++depth) {
        auto it = std::find(loops.begin(), loops.end(), target.edges[i]);
        digits = add_sat(mul_sat(digits, loops.size()), static_cast<std::uint64_t>(it - loops.begin()));
    }
    if (i == target.edges.size() || target.edges[i].bundle != rule.final_bundle) return std::nullopt;
    const std::uint64_t index = target.edges[i].index;
    if (loops.empty()) {
        pos = i + 1;
        return index;
    }
    if (final_bundle.mult.is_infinite()) return std::nullopt;
    const std::uint64_t m = final_bundle.mult.value();
    std::uint64_t offset = 0;
    std::uint64_t level = m;
    for (std::size_t d = 0; d < depth; ++d) {
        offset = add_sat(offset, level);
        level = mul_sat(level, loops.size());
    }
    std::uint64_t rank = add_sat(offset, add_sat(mul_sat(digits, m), index));
    if (rank == UINT64_MAX) return std::nullopt;
    pos = i + 1;
    return rank;
}

bool GraphFunctor::match_factors(const ExplicitTemplate& t, std::size_t factor, const Path& target, std::size_t pos,
                                 std::optional<std::uint64_t> k, const MatchContinuation& cont) const {
    if (factor == t.factors.size()) return cont(pos, k);
    const auto& f = t.factors[factor];
    const auto& edges = target.edges;
    switch (f.kind) {
        case Factor::Kind::SameIndex:
            if (pos >= edges.size() || edges[pos].bundle != f.bundle) return false;
            if (k && *k != edges[pos].index) return false;
            return match_factors(t, factor + 1, target, pos + 1, edges[pos].index, cont);
        case Factor::Kind::Fixed:
            if (pos >= edges.size() || edges[pos] != Edge{f.bundle, f.index}) return false;
            return match_factors(t, factor + 1, target, pos + 1, k, cont);
        case Factor::Kind::Power: {
            const Edge loop{f.bundle, f.index};
            std::size_t run = 0;
            while (pos + run < edges.size() && edges[pos + run] == loop) ++run;
            if (k) return *k <= run && match_factors(t, factor + 1, target, pos + *k, k, cont);
            for (std::size_t c = run + 1; c-- > 0;)
                if (match_factors(t, factor + 1, target, pos + c, c, cont)) return true;
            return false;
        }
    }
    return false;
}

bool GraphFunctor::decode_from(std::size_t vertex, const Path& target, std::size_t pos, std::vector<Edge>& out) const {
    if (pos == target.edges.size()) return true;
    for (auto b : source_->out_bundles(vertex)) {
        const auto& bundle = source_->bundle(b);
        auto accept = [&](const Edge& e, std::size_t next) {
            if (next == pos) return false;
            out.push_back(e);
            if (decode_from(bundle.dst, target, next, out)) return true;
            out.pop_back();
            return false;
        };
        for (auto it = overrides_.lower_bound(Edge{b, 0}); it != overrides_.end() && it->first.bundle == b; ++it) {
            const auto& image = it->second.edges;
            if (image.empty() || pos + image.size() > target.edges.size()) continue;
            if (!std::equal(image.begin(), image.end(), target.edges.begin() + static_cast<std::ptrdiff_t>(pos))) continue;
            if (accept(it->first, pos + image.size())) return true;
        }
        const auto& rule = rules_[b];
        if (const auto* canonical = std::get_if<CanonicalResolution>(&rule)) {
            std::size_t next = pos;
            auto rank = canonical_rank(*canonical, target, next);
            if (!rank || !bundle.mult.admits_index(*rank)) continue;
            Edge e{b, *rank};
            if (overrides_.contains(e)) continue;
            if (accept(e, next)) return true;
        } else {
            const auto& t = std::get<ExplicitTemplate>(rule);
            bool found = match_factors(t, 0, target, pos, std::nullopt, [&](std::size_t next, std::optional<std::uint64_t> k) {
                Edge e{b, k.value_or(0)};
                if (!bundle.mult.admits_index(e.index) || overrides_.contains(e)) return false;
                return accept(e, next);
            });
            if (found) return true;
        }
    }
    return false;
}

std::optional<Path> GraphFunctor::decode(const Path& p) const {
    if (!target_->is_valid(p)) throw FunctorError("invalid target path");
    for (std::size_t u = 0; u < source_->vertex_count(); ++u) {
        if (vertex_map_[u] != p.base) continue;
        std::vector<Edge> edges;
        if (decode_from(u, p, 0, edges)) return Path{u, std::move(edges)};
    }
    return std::nullopt;
}

std::vector<std::string> GraphFunctor::validate(std::uint64_t max_index) const {
    std::vector<std::string> issues;
    for (std::size_t b = 0; b < source_->bundle_count(); ++b) {
        const auto& bundle = source_->bundle(b);
        if (const auto* t = std::get_if<ExplicitTemplate>(&rules_[b])) {
            for (const auto& f : t->factors)
                if (f.kind == Factor::Kind::Power && !target_->bundle(f.bundle).is_loop())
                    issues.push_back("rule for '" + bundle.label + "' raises non-loop '" + target_->bundle(f.bundle).label +
                                     "' to a power");
        }
        std::uint64_t top = bundle.mult.is_infinite() ? max_index : std::min(max_index, bundle.mult.value() - 1);
        for (std::uint64_t i = 0; i <= top; ++i) {
            Edge e{b, i};
            std::string where = "image of " + to_string(*source_, e);
            try {
                Path image = eval(e);
                if (!target_->is_valid(image))
                    issues.push_back(where + " is not a path");
                else if (image.base != vertex_map_[bundle.src] || target_->range(image) != vertex_map_[bundle.dst])
                    issues.push_back(where + " = " + to_string(*target_, image) + " has wrong endpoints");
            } catch (const FunctorError& err) {
                issues.push_back(where + ": " + err.what());
            }
        }
    }
    return issues;
}

bool operator==(const GraphFunctor& a, const GraphFunctor& b) {
    return a.name_ == b.name_ && same_structure(*a.source_, *b.source_) && same_structure(*a.target_, *b.target_) &&
           a.vertex_map_ == b.vertex_map_ && a.rules_ == b.rules_ && a.overrides_ == b.overrides_;
}

GraphFunctor restrict_functor(const GraphFunctor& f, GraphPtr sub_source, GraphPtr sub_target) {
    const auto& src = f.source();
    const auto& tgt = f.target();
    auto to_sub = [&](std::size_t target_bundle) { return sub_target->bundle_index(tgt.bundle(target_bundle).label); };
    std::vector<std::size_t> vmap;
    for (std::size_t v = 0; v < sub_source->vertex_count(); ++v)
        vmap.push_back(sub_target->vertex(tgt.vertex_id(f.map_vertex(src.vertex(sub_source->vertex_id(v))))));
    std::vector<EdgeRule> rules;
    for (std::size_t b = 0; b < sub_source->bundle_count(); ++b) {
        const auto& rule = f.rule(src.bundle_index(sub_source->bundle(b).label));
        if (const auto* t = std::get_if<ExplicitTemplate>(&rule)) {
            ExplicitTemplate copy = *t;
            for (auto& factor : copy.factors) factor.bundle = to_sub(factor.bundle);
            rules.emplace_back(std::move(copy));
        } else {
            rules.emplace_back(CanonicalResolution{to_sub(std::get<CanonicalResolution>(rule).final_bundle)});
        }
    }
    GraphFunctor out(f.name() + "_restricted", sub_source, sub_target, std::move(vmap), std::move(rules));
    for (const auto& [edge, image] : f.overrides()) {
        auto sb = sub_source->find_bundle(src.bundle(edge.bundle).label);
        if (!sb) continue;
        Path translated{sub_target->vertex(tgt.vertex_id(image.base)), {}};
        for (const auto& e : image.edges) translated.edges.push_back({to_sub(e.bundle), e.index});
        out.set_override({*sb, edge.index}, std::move(translated));
    }
    return out;
}

FunctorConditionsReport check_functor_conditions(const GraphFunctor& f, std::size_t max_len, std::uint64_t max_index) {
    FunctorConditionsReport report;
    const auto& src = f.source();
    const auto& tgt = f.target();

    auto paths = enumerate_all_paths(src, max_len, max_index);
    report.paths_checked = paths.size();
    std::vector<Path> images;
    images.reserve(paths.size());
    std::map<Path, std::vector<std::size_t>> by_image;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        images.push_back(f.eval(paths[i]));
        by_image[images.back()].push_back(i);
    }
    for (std::size_t j = 0; j < paths.size() && report.reflects_prolongation; ++j) {
        Path prefix = Path::vertex(images[j].base);
        for (std::size_t len = 0;; ++len) {
            if (auto it = by_image.find(prefix); it != by_image.end()) {
                for (auto i : it->second) {
                    auto rel = prolongation_compare(paths[i], paths[j]);
                    if (rel != PrefixRelation::Equal && rel != PrefixRelation::APrefixOfB) {
                        report.reflects_prolongation = false;
                        report.witnesses.push_back("f(" + to_string(src, paths[i]) + ") is a prefix of f(" +
                                                   to_string(src, paths[j]) + ") but the paths are not");
                        break;
                    }
                }
            }
            if (!report.reflects_prolongation || len == images[j].edges.size()) break;
            prefix.edges.push_back(images[j].edges[len]);
        }
    }

    for (std::size_t v = 0; v < src.vertex_count(); ++v) {
        if (classify_vertex(src, v) != VertexClass::Regular) continue;
        auto fail = [&](const std::string& why) {
            report.regular_bijection = false;
            report.witnesses.push_back("regular vertex '" + src.vertex_id(v) + "': " + why);
        };
        const std::size_t fv = f.map_vertex(v);
        if (tgt.out_multiplicity(fv).is_infinite()) {
            fail("image vertex emits infinitely many edges");
            continue;
        }
        std::set<Edge> hit;
        bool ok = true;
        for (auto b : src.out_bundles(v)) {
            for (std::uint64_t i = 0; ok && i < src.bundle(b).mult.value(); ++i) {
                Path image = f.eval(Edge{b, i});
                if (image.edges.size() != 1) {
                    fail("image of " + to_string(src, Edge{b, i}) + " is not an edge");
                    ok = false;
                } else if (!hit.insert(image.edges.front()).second) {
                    fail("two edges share the image " + to_string(tgt, image));
                    ok = false;
                }
            }
        }
        if (ok && ExtNat(hit.size()) != tgt.out_multiplicity(fv)) fail("edges do not cover the image vertex's out-edges");
    }
    return report;
}

std::string rule_to_string(const Graph& target, const EdgeRule& rule) {
    if (const auto* c = std::get_if<CanonicalResolution>(&rule)) return "canonical " + target.bundle(c->final_bundle).label;
    std::string out;
    for (const auto& f : std::get<ExplicitTemplate>(rule).factors) {
        if (!out.empty()) out += ' ';
        const auto& label = target.bundle(f.bundle).label;
        switch (f.kind) {
            case Factor::Kind::SameIndex: out += label; break;
            case Factor::Kind::Fixed: out += label + "[" + std::to_string(f.index) + "]"; break;
            case Factor::Kind::Power:
                out += f.index == 0 ? label + "^k" : label + "[" + std::to_string(f.index) + "]^k";
                break;
        }
    }
    return out;
}

EdgeRule parse_rule(const Graph& source, std::size_t source_bundle, const Graph& target, std::string_view text) {
    (void)source;
    (void)source_bundle;
    auto tok = tokens(text);
    if (tok.empty()) throw FunctorError("empty edge rule");
    if (tok[0] == "canonical") {
        if (tok.size() != 2) throw FunctorError("expected 'canonical <label>'");
        return CanonicalResolution{target.bundle_index(tok[1])};
    }
    ExplicitTemplate t;
    for (std::string_view item : tok) {
        Factor f;
        bool power = false;
        if (item.size() > 2 && item.substr(item.size() - 2) == "^k") {
            power = true;
            item.remove_suffix(2);
        }
        std::optional<std::uint64_t> index;
        if (auto open = item.find('['); open != std::string_view::npos) {
            if (item.back() != ']') throw FunctorError("malformed factor '" + std::string(item) + "'");
            index = parse_index(item.substr(open + 1, item.size() - open - 2), item);
            item = item.substr(0, open);
        }
        f.bundle = target.bundle_index(item);
        if (power) {
            if (!target.bundle(f.bundle).is_loop())
                throw FunctorError("'" + std::string(item) + "^k' requires a self-loop bundle");
            f.kind = Factor::Kind::Power;
            f.index = index.value_or(0);
        } else if (index) {
            f.kind = Factor::Kind::Fixed;
            f.index = *index;
        }
        t.factors.push_back(f);
    }
    return t;
}

GraphFunctor parse_functor(std::string_view text, const std::function<GraphPtr(const std::string&)>& resolve_graph) {
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line = 0;
    auto fail = [&](const std::string& why) { throw FunctorError("line " + std::to_string(line) + ": " + why); };
    std::string name;
    GraphPtr source, target;
    std::vector<std::pair<std::string, std::string>> vertex_lines;
    std::vector<std::tuple<std::size_t, std::string, std::string, std::string>> map_lines;  // line, bundle, index, rhs
    while (std::getline(in, raw)) {
        ++line;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        auto tok = tokens(raw);
        if (tok.empty()) continue;
        if (tok[0] == "functor") {
            if (source) fail("duplicate 'functor' header");
            if (tok.size() != 5 || tok[1].size() < 2 || tok[1].back() != ':' || tok[3] != "->")
                fail("expected 'functor <name>: <source> -> <target>'");
            name = tok[1].substr(0, tok[1].size() - 1);
            source = resolve_graph(tok[2]);
            target = resolve_graph(tok[4]);
            if (!source || !target) fail("unknown graph in functor header");
        } else if (tok[0] == "vertex") {
            if (tok.size() != 4 || tok[2] != "->") fail("expected 'vertex <src> -> <dst>'");
            vertex_lines.emplace_back(tok[1], tok[3]);
        } else if (tok[0] == "map") {
            if (tok.size() < 4 || tok[2] != "->") fail("expected 'map <bundle>[k] -> <factor> ...'");
            std::string lhs = tok[1], index = "k";
            if (auto open = lhs.find('['); open != std::string::npos) {
                if (lhs.back() != ']') fail("malformed '" + lhs + "'");
                index = lhs.substr(open + 1, lhs.size() - open - 2);
                lhs = lhs.substr(0, open);
            }
            std::string rhs;
            for (std::size_t i = 3; i < tok.size(); ++i) rhs += (i > 3 ? " " : "") + tok[i];
            map_lines.emplace_back(line, lhs, index, rhs);
        } else {
            fail("unknown directive '" + tok[0] + "'");
        }
    }
    if (!source) throw FunctorError("missing 'functor' header");

    std::vector<std::size_t> vmap(source->vertex_count(), SIZE_MAX);
    for (const auto& [a, b] : vertex_lines) vmap.at(source->vertex(a)) = target->vertex(b);
    for (std::size_t v = 0; v < vmap.size(); ++v) {
        if (vmap[v] != SIZE_MAX) continue;
        auto same = target->find_vertex(source->vertex_id(v));
        if (!same) throw FunctorError("no image for vertex '" + source->vertex_id(v) + "'");
        vmap[v] = *same;
    }

    std::vector<std::optional<EdgeRule>> rules(source->bundle_count());
    std::vector<std::pair<Edge, Path>> overrides;
    for (const auto& [ln, bundle, index, rhs] : map_lines) {
        line = ln;
        auto b = source->bundle_index(bundle);
        EdgeRule rule = parse_rule(*source, b, *target, rhs);
        if (index == "k") {
            if (rules[b]) fail("duplicate rule for '" + bundle + "'");
            rules[b] = std::move(rule);
        } else {
            Edge e{b, parse_index(index, bundle)};
            GraphFunctor single("tmp", source, target, vmap,
                                std::vector<EdgeRule>(source->bundle_count(), rule));
            overrides.emplace_back(e, single.eval(e));
        }
    }
    std::vector<EdgeRule> final_rules;
    for (std::size_t b = 0; b < source->bundle_count(); ++b) {
        if (rules[b]) {
            final_rules.push_back(std::move(*rules[b]));
            continue;
        }
        auto same = target->find_bundle(source->bundle(b).label);
        if (!same) throw FunctorError("no rule for bundle '" + source->bundle(b).label + "'");
        final_rules.emplace_back(ExplicitTemplate{{Factor{*same, Factor::Kind::SameIndex, 0}}});
    }
    GraphFunctor f(name, source, target, std::move(vmap), std::move(final_rules));
    for (auto& [e, image] : overrides) f.set_override(e, std::move(image));
    return f;
}

std::string serialize_functor(const GraphFunctor& f) {
    const auto& src = f.source();
    const auto& tgt = f.target();
    std::ostringstream out;
    out << "functor " << f.name() << ": " << src.name() << " -> " << tgt.name() << '\n';
    for (std::size_t v = 0; v < src.vertex_count(); ++v)
        out << "vertex " << src.vertex_id(v) << " -> " << tgt.vertex_id(f.map_vertex(v)) << '\n';
    for (std::size_t b = 0; b < src.bundle_count(); ++b)
        out << "map " << src.bundle(b).label << "[k] -> " << rule_to_string(tgt, f.rule(b)) << '\n';
    for (const auto& [e, image] : f.overrides()) {
        out << "map " << src.bundle(e.bundle).label << "[" << e.index << "] ->";
        for (const auto& edge : image.edges)
            out << ' ' << tgt.bundle(edge.bundle).label << '[' << edge.index << ']';
        out << '\n';
    }
    return out.str();
}

}  // namespace pullgraph
