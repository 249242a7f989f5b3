#include "pullgraph/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <iomanip>

#include "CLI11.hpp"
#include "json.hpp"
#include "pullgraph/algebra.hpp"
#include "pullgraph/catalog.hpp"
#include "pullgraph/certificate.hpp"
#include "pullgraph/expression.hpp"
#include "pullgraph/graph_io.hpp"
#include "pullgraph/pushout.hpp"
#include "pullgraph/resolution.hpp"
#include "pullgraph/subsets.hpp"

namespace pullgraph {

namespace {

using nlohmann::json;

// A graph reference is a file path if such a file exists, else a catalog spec.
GraphPtr load_graph(const std::string& ref) {
    if (ref.empty()) throw CLI::ValidationError("graph", "no graph given");
    if (std::filesystem::is_regular_file(ref)) {
        auto text = read_file(ref);
        if (ref.ends_with(".json")) return share(graph_from_json(json::parse(text)));
        return share(parse_graph(text));
    }
    return share(catalog_get(ref));
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

void print_checks(std::ostream& out, const CheckList& checks) {
    std::size_t width = 0;
    for (const auto& [name, _] : checks.entries()) width = std::max(width, name.size());
    for (const auto& [name, value] : checks.entries())
        out << "  " << std::left << std::setw(static_cast<int>(width)) << name << "  " << (value ? "pass" : "FAIL") << '\n';
}

void print_witnesses(std::ostream& out, const std::vector<std::string>& witnesses) {
    if (witnesses.empty()) return;
    out << "witnesses:\n";
    for (const auto& w : witnesses) out << "  " << w << '\n';
}

struct Options {
    std::size_t max_len = 6;
    std::uint64_t max_index = 4;
    bool json = false;

    Bounds bounds() const { return {max_len, max_index}; }
};

int print_pullback(std::ostream& out, const Options& opt, const PullbackCertificate& cert) {
    if (opt.json) {
        out << pullback_to_json(cert).dump(2) << '\n';
    } else {
        out << "E2: " << cert.e2->name() << "   F2: " << to_string(*cert.e2, cert.f2_vertices) << "   bounds: len <= "
            << cert.bounds.max_len << ", index <= " << cert.bounds.max_index << '\n';
        if (cert.resolution) {
            out << "E1:\n" << serialize_graph(*cert.resolution->e1);
            out << "F1:\n" << serialize_graph(*cert.resolution->f1);
            out << serialize_functor(cert.resolution->functor);
        }
        out << "checks:\n";
        print_checks(out, cert.checks);
        out << "unital: " << yes_no(cert.unital) << "   e1_af: " << yes_no(cert.e1_af) << '\n';
        print_witnesses(out, cert.witnesses);
        out << "verified: " << yes_no(cert.verified()) << '\n';
    }
    return cert.verified() ? kExitOk : kExitNegative;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Graph algebra pullback toolkit: resolutions, pushouts over sinks and exact Leavitt path algebra arithmetic",
                 "pullgraph"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_option("--max-len", opt.max_len, "Path length bound for bounded checks")->capture_default_str();
    app.add_option("--max-index", opt.max_index, "Edge index bound for bounded checks")->capture_default_str();
    app.add_flag("--json", opt.json, "Emit JSON");
    app.set_version_flag("--version", PULLGRAPH_VERSION);

    std::function<int()> action;
    std::string graph_ref, sub_ref, ambient_ref, h_ref, vmap, set_spec, attach, cert_file, expr, exempt, show_spec;

    auto* catalog = app.add_subcommand("catalog", "Built-in graphs");
    catalog->require_subcommand(1);
    auto* list = catalog->add_subcommand("list", "List catalog entries");
    list->callback([&] {
        action = [&] {
            if (opt.json) {
                json arr = json::array();
                for (const auto& e : catalog_entries())
                    arr.push_back(json{{"key", e.key}, {"params", e.params}, {"provenance", e.provenance}});
                out << arr.dump(2) << '\n';
                return kExitOk;
            }
            for (const auto& e : catalog_entries()) {
                std::string head = e.params.empty() ? e.key : e.key + ":" + e.params;
                out << std::left << std::setw(22) << head << e.provenance << '\n';
            }
            return kExitOk;
        };
    });
    auto* show = catalog->add_subcommand("show", "Print a catalog graph");
    show->add_option("spec", show_spec, "Catalog spec, e.g. rnm:2,2,1,1")->required();
    show->callback([&] {
        action = [&] {
            Graph g = catalog_get(show_spec);
            out << (opt.json ? graph_to_json(g).dump(2) + "\n" : serialize_graph(g));
            return kExitOk;
        };
    });

    auto add_graph = [&](CLI::App* cmd) {
        return cmd->add_option("--graph,--catalog", graph_ref, "Graph file or catalog spec")->required();
    };

    auto* admissible = app.add_subcommand("check-admissible", "Check that a subgraph inclusion is admissible");
    admissible->add_option("--sub", sub_ref, "Subgraph (file or catalog spec)")->required();
    admissible->add_option("--ambient", ambient_ref, "Ambient graph (file or catalog spec)")->required();
    admissible->add_option("--vmap", vmap, "Vertex map sub=ambient,...; default matches ids");
    admissible->callback([&] {
        action = [&] {
            auto sub = load_graph(sub_ref);
            auto ambient = load_graph(ambient_ref);
            auto map = parse_vertex_map(*sub, *ambient, vmap);
            auto report = check_admissible(*sub, *ambient, map);
            std::optional<bool> iso;
            if (report.admissible()) iso = check_quotient_iso(*sub, *ambient, map);
            bool ok = report.admissible() && iso.value_or(false);
            if (opt.json) {
                json j{{"a1_hereditary", report.a1_hereditary},
                       {"a1_saturated", report.a1_saturated},
                       {"a2_edge_condition", report.a2_edge_condition},
                       {"a3_emission_condition", report.a3_emission_condition},
                       {"admissible", report.admissible()},
                       {"quotient_isomorphic", iso ? json(*iso) : json(nullptr)},
                       {"witnesses", report.witnesses}};
                out << j.dump(2) << '\n';
            } else {
                out << "A1 hereditary complement: " << yes_no(report.a1_hereditary) << '\n'
                    << "A1 saturated complement:  " << yes_no(report.a1_saturated) << '\n'
                    << "A2 edges into subgraph:   " << yes_no(report.a2_edge_condition) << '\n'
                    << "A3 emission condition:    " << yes_no(report.a3_emission_condition) << '\n'
                    << "admissible: " << yes_no(report.admissible()) << '\n';
                if (iso) out << "quotient isomorphic to subgraph: " << yes_no(*iso) << '\n';
                print_witnesses(out, report.witnesses);
            }
            return ok ? kExitOk : kExitNegative;
        };
    });

    auto* quotient = app.add_subcommand("quotient", "Quotient graph by a hereditary saturated set");
    quotient->set_help_flag("--help", "Print this help message and exit");
    add_graph(quotient);
    quotient->add_option("--h", set_spec, "Comma-separated vertex set H")->required();
    quotient->callback([&] {
        action = [&] {
            auto g = load_graph(graph_ref);
            Graph q = quotient_graph(*g, parse_vertex_set(*g, set_spec));
            out << (opt.json ? graph_to_json(q).dump(2) + "\n" : serialize_graph(q));
            return kExitOk;
        };
    });

    auto* resolve_cmd = app.add_subcommand("resolve", "Build the loop-free resolution E1, F1 and the canonical functor");
    add_graph(resolve_cmd);
    resolve_cmd->add_option("--f2", set_spec, "Comma-separated vertex set of F2")->required();
    resolve_cmd->callback([&] {
        action = [&] {
            auto g = load_graph(graph_ref);
            auto r = resolve(g, parse_vertex_set(*g, set_spec));
            bool af = loop_free(*r.e1);
            if (opt.json) {
                json j = resolution_to_json(r);
                j["e1_loop_free"] = af;
                out << j.dump(2) << '\n';
            } else {
                out << "E1:\n" << serialize_graph(*r.e1) << "F1:\n" << serialize_graph(*r.f1) << serialize_functor(r.functor);
                out << "E1 loop-free: " << yes_no(af) << '\n';
            }
            if (!af) err << "E1 has a cycle: the resolution does not give an AF algebra\n";
            return af ? kExitOk : kExitNegative;
        };
    });

    auto* pullback = app.add_subcommand("verify-pullback", "Verify the pullback square for (E2, F2)");
    add_graph(pullback);
    pullback->add_option("--f2", set_spec, "Comma-separated vertex set of F2")->required();
    pullback->callback([&] {
        action = [&] {
            auto g = load_graph(graph_ref);
            return print_pullback(out, opt, verify_pullback(g, parse_vertex_set(*g, set_spec), opt.bounds()));
        };
    });

    auto* pushout = app.add_subcommand("pushout", "Glue H onto a graph over sinks");
    pushout->set_help_flag("--help", "Print this help message and exit");
    add_graph(pushout);
    pushout->add_option("--h", h_ref, "Graph H (file or catalog spec)")->required();
    pushout->add_option("--attach", attach, "Identifications e=h,...")->required();
    pushout->callback([&] {
        action = [&] {
            auto e = load_graph(graph_ref);
            auto h = load_graph(h_ref);
            Graph glued = pushout_over_sinks(parse_attachment(e, h, attach));
            out << (opt.json ? graph_to_json(glued).dump(2) + "\n" : serialize_graph(glued));
            return kExitOk;
        };
    });

    auto* extension = app.add_subcommand("verify-extension", "Extend a verified pullback by gluing H over sinks");
    extension->set_help_flag("--help", "Print this help message and exit");
    auto* cert_opt = extension->add_option("--cert", cert_file, "Base pullback certificate (JSON)");
    auto* ext_graph = extension->add_option("--graph,--catalog", graph_ref, "E2 (file or catalog spec)");
    auto* ext_f2 = extension->add_option("--f2", set_spec, "Comma-separated vertex set of F2");
    cert_opt->excludes(ext_graph)->excludes(ext_f2);
    ext_graph->needs(ext_f2);
    extension->add_option("--h", h_ref, "Graph H (file or catalog spec)")->required();
    extension->add_option("--attach", attach, "Identifications e=h,...")->required();
    extension->callback([&] {
        action = [&] {
            std::optional<PullbackCertificate> base;
            if (!cert_file.empty()) {
                auto doc = json::parse(read_file(cert_file));
                base = reverify_pullback(doc);
                if (!same_outcomes(doc, *base)) {
                    err << "the base certificate does not re-verify to its recorded outcomes\n";
                    return kExitNegative;
                }
            } else if (!graph_ref.empty()) {
                auto g = load_graph(graph_ref);
                base = verify_pullback(g, parse_vertex_set(*g, set_spec), opt.bounds());
            } else {
                throw CLI::ValidationError("verify-extension", "give --cert or --graph with --f2");
            }
            auto h = load_graph(h_ref);
            auto ext = verify_extension(*base, h, attach, opt.bounds());
            std::optional<KernelDescriptorReport> kernel;
            if (ext.glued1) kernel = kernel_descriptor_check(*base, ext, opt.bounds());
            bool ok = ext.verified() && kernel && kernel->agrees;
            if (opt.json) {
                json j = extension_to_json(*base, ext);
                if (kernel)
                    j["kernel_descriptor"] = json{{"agrees", kernel->agrees},
                                                  {"monomials_checked", kernel->monomials_checked},
                                                  {"in_kernel", kernel->in_kernel},
                                                  {"witnesses", kernel->witnesses}};
                out << j.dump(2) << '\n';
            } else {
                if (ext.glued1) out << "glued E1:\n" << serialize_graph(*ext.glued1);
                if (ext.glued2) out << "glued E2:\n" << serialize_graph(*ext.glued2);
                if (ext.psi) out << serialize_functor(*ext.psi);
                out << "checks:\n";
                print_checks(out, ext.checks);
                if (kernel)
                    out << "kernel descriptor: " << (kernel->agrees ? "agrees" : "DISAGREES") << " on "
                        << kernel->monomials_checked << " monomials (" << kernel->in_kernel << " in the kernel)\n";
                if (!ext.corners.empty())
                    out << "square: " << ext.corners[0] << " -> " << ext.corners[1] << ", " << ext.corners[2] << " -> "
                        << ext.corners[3] << '\n';
                print_witnesses(out, ext.witnesses);
                if (kernel) print_witnesses(out, kernel->witnesses);
                out << "verified: " << yes_no(ok) << '\n';
            }
            return ok ? kExitOk : kExitNegative;
        };
    });

    auto* algebra = app.add_subcommand("algebra", "Evaluate an expression in the Leavitt path algebra");
    add_graph(algebra);
    algebra->add_option("--expr", expr, "Expression, e.g. 'S*(t2) S(t1) + P(w1)'")->required();
    algebra->add_option("--exempt", exempt, "Extra vertices exempt from the sum relation");
    algebra->callback([&] {
        action = [&] {
            auto g = load_graph(graph_ref);
            auto a = make_algebra(g, parse_vertex_set(*g, exempt));
            auto value = parse_expression(a, expr);
            if (opt.json) {
                json terms = json::array();
                for (const auto& [m, c] : value.terms())
                    terms.push_back(json{{"alpha", to_string(*g, m.alpha)},
                                         {"beta", to_string(*g, m.beta)},
                                         {"coefficient", c.get_str()}});
                out << json{{"normal_form", to_string(value)}, {"terms", terms}}.dump(2) << '\n';
            } else {
                out << to_string(value) << '\n';
            }
            return kExitOk;
        };
    });

    auto* dot = app.add_subcommand("export-dot", "Render a graph in Graphviz format");
    add_graph(dot);
    dot->callback([&] {
        action = [&] {
            out << export_dot(*load_graph(graph_ref));
            return kExitOk;
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInputError;
    }
    if (!action) return kExitInputError;
    try {
        return action();
    } catch (const PreconditionError& e) {
        err << "hypothesis violated: " << e.what() << '\n';
        return kExitNegative;
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
}

}  // namespace pullgraph
