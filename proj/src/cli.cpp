#include "normsim/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "normsim/constructions.hpp"
#include "normsim/io.hpp"
#include "normsim/simulation.hpp"
#include "normsim/spec_lang.hpp"
#include "normsim/trace_oracle.hpp"

namespace normsim::cli {

namespace {

using nlohmann::json;

void print_report_text(const CheckReport& report) {
    std::cout << (report.accepted ? "accepted" : "rejected") << "\n";
    for (const auto& v : report.violations) {
        std::cout << "violation " << v.condition;
        if (v.step) {
            std::cout << " at step " << v.step->src << " " << v.step->label.str() << " "
                      << v.step->dst;
        }
        if (v.state) {
            std::cout << " at state " << *v.state;
        }
        if (v.related) {
            std::cout << " related " << *v.related;
        }
        std::cout << ": " << v.detail << "\n";
    }
    if (report.truncated) {
        std::cout << "further violations omitted\n";
    }
    if (report.max_image) {
        std::cout << "max image size " << *report.max_image << "\n";
    }
}

std::size_t elaboration_cap() {
    if (const char* env = std::getenv("NORMSIM_MAX_STATES")) {
        return static_cast<std::size_t>(std::stoull(env));
    }
    return kDefaultMaxElaboratedStates;
}

int run_solver(const std::string& solver, const std::string& path, std::size_t groups) {
    std::string command = solver + " " + path;
    FILE* pipe = popen(command.c_str(), "r");
    if (pipe == nullptr) {
        std::cerr << "cannot run solver: " << command << "\n";
        return 2;
    }
    std::string output;
    char buffer[256];
    while (fgets(buffer, sizeof buffer, pipe) != nullptr) {
        output += buffer;
    }
    pclose(pipe);
    std::istringstream lines(output);
    std::string line;
    std::size_t unsat = 0;
    std::size_t other = 0;
    while (std::getline(lines, line)) {
        if (line == "unsat") {
            ++unsat;
        } else if (line == "sat" || line == "unknown") {
            ++other;
        }
    }
    std::cout << "solver: " << unsat << "/" << groups << " groups unsat\n";
    if (other > 0 || unsat != groups) {
        std::cout << "solver did not confirm all groups\n";
        return 1;
    }
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"certificate checking, constructions and verification condition "
                 "generation for labeled transition systems"};
    app.require_subcommand(1);

    std::string kind;
    std::string lower_path;
    std::string upper_path;
    std::string cert_path;
    std::string exec_path;
    std::string spec_path;
    std::string out_path;
    std::string map_out;
    std::string pi1_out;
    std::string pi2_out;
    std::string solver;
    std::string format = "text";
    bool adapted = false;
    std::size_t max_violations = kDefaultMaxViolations;
    std::size_t budget = kDefaultSearchBudget;
    std::size_t depth = 0;
    bool depth_given = false;
    std::uint64_t nat_max = 2;
    std::uint64_t seq_max = 2;

    auto* check_cmd = app.add_subcommand("check", "check a certificate");
    check_cmd->add_option("--kind", kind, "refinement|forward|backward|history|prophecy")
        ->required();
    check_cmd->add_option("--lower", lower_path, "lower automaton file")->required();
    check_cmd->add_option("--upper", upper_path, "upper automaton file")->required();
    check_cmd->add_option("--cert", cert_path, "certificate file")->required();
    check_cmd->add_flag("--adapted", adapted, "use the reachability-adapted conditions");
    check_cmd->add_option("--max-violations", max_violations, "cap on reported violations");
    check_cmd->add_option("--format", format, "text|json");

    auto* find_cmd = app.add_subcommand("find", "search for a certificate");
    find_cmd->add_option("--kind", kind, "refinement|forward|backward")->required();
    find_cmd->add_option("--lower", lower_path, "lower automaton file")->required();
    find_cmd->add_option("--upper", upper_path, "upper automaton file")->required();
    find_cmd->add_option("--budget", budget, "state pair budget");
    find_cmd->add_option("-o,--out", out_path, "write the certificate here");

    auto* include_cmd = app.add_subcommand("include", "decide finite-trace inclusion");
    include_cmd->add_option("--lower", lower_path, "lower automaton file")->required();
    include_cmd->add_option("--upper", upper_path, "upper automaton file")->required();
    include_cmd->add_option("--format", format, "text|json");

    auto* traces_cmd = app.add_subcommand("traces", "list bounded finite traces");
    traces_cmd->add_option("--spec", spec_path, "automaton file")->required();
    traces_cmd->add_option("--depth", depth, "maximum execution length")->required();

    auto* correspond_cmd =
        app.add_subcommand("correspond", "find an index relation between two executions");
    correspond_cmd->add_option("--lower", lower_path, "lower automaton file")->required();
    correspond_cmd->add_option("--upper", upper_path, "upper automaton file")->required();
    correspond_cmd->add_option("--cert", cert_path, "certificate providing the state relation")
        ->required();
    correspond_cmd->add_option("--exec", exec_path, "fragment file with two fragments")
        ->required();

    auto* unfold_cmd = app.add_subcommand("unfold", "unfold an automaton into a forest");
    unfold_cmd->add_option("--spec", spec_path, "automaton file")->required();
    unfold_cmd->add_option("--depth", depth, "maximum execution length")
        ->each([&](const std::string&) { depth_given = true; });
    unfold_cmd->add_option("-o,--out", out_path, "output automaton file")->required();
    unfold_cmd->add_option("--map-out", map_out, "write the last-state map here");

    auto* superpose_cmd = app.add_subcommand("superpose", "superpose two automata over a relation");
    superpose_cmd->add_option("--lower", lower_path, "lower automaton file")->required();
    superpose_cmd->add_option("--upper", upper_path, "upper automaton file")->required();
    superpose_cmd->add_option("--rel", cert_path, "certificate providing the relation")
        ->required();
    superpose_cmd->add_option("-o,--out", out_path, "output automaton file")->required();
    superpose_cmd->add_option("--pi1-out", pi1_out, "write the left projection here");
    superpose_cmd->add_option("--pi2-out", pi2_out, "write the right projection here");

    auto* vcgen_cmd = app.add_subcommand("vcgen", "generate SMT-LIB verification conditions");
    vcgen_cmd->add_option("--kind", kind, "refinement|forward")->required();
    vcgen_cmd->add_option("--lower", lower_path, "lower specification file")->required();
    vcgen_cmd->add_option("--upper", upper_path, "upper specification file")->required();
    vcgen_cmd->add_option("--cert", cert_path, "symbolic certificate file")->required();
    vcgen_cmd->add_option("-o,--out", out_path, "output SMT-LIB file")->required();
    vcgen_cmd->add_option("--solver", solver, "run this solver on the output");

    auto* elaborate_cmd = app.add_subcommand("elaborate", "elaborate a specification");
    elaborate_cmd->add_option("--spec", spec_path, "specification file")->required();
    elaborate_cmd->add_option("--nat-max", nat_max, "naturals range over 0..nat-max-1");
    elaborate_cmd->add_option("--seq-max", seq_max, "maximum sequence length");
    elaborate_cmd->add_option("-o,--out", out_path, "output automaton file")->required();

    std::vector<const char*> argv;
    argv.push_back("normsim");
    for (const auto& arg : args) {
        argv.push_back(arg.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (check_cmd->parsed()) {
            Automaton lower = load_automaton(lower_path);
            Automaton upper = load_automaton(upper_path);
            Certificate cert = load_certificate(cert_path);
            if (to_string(kind_of(cert)) != kind) {
                std::cerr << "certificate kind " << to_string(kind_of(cert))
                          << " does not match --kind " << kind << "\n";
                return 2;
            }
            CheckMode mode = adapted ? CheckMode::adapted : CheckMode::plain;
            CheckReport report = check_certificate(lower, upper, cert, mode, max_violations);
            if (format == "json") {
                std::cout << report_to_json(report).dump(2) << "\n";
            } else {
                print_report_text(report);
            }
            return report.accepted ? 0 : 1;
        }
        if (find_cmd->parsed()) {
            Automaton lower = load_automaton(lower_path);
            Automaton upper = load_automaton(upper_path);
            auto cert = find_certificate(lower, upper, certificate_kind_from_string(kind), budget);
            if (!cert) {
                std::cout << "no " << kind << " certificate exists\n";
                return 1;
            }
            json j = certificate_to_json(*cert);
            if (!out_path.empty()) {
                write_file(out_path, j.dump(2) + "\n");
            } else {
                std::cout << j.dump(2) << "\n";
            }
            return 0;
        }
        if (include_cmd->parsed()) {
            Automaton lower = load_automaton(lower_path);
            Automaton upper = load_automaton(upper_path);
            InclusionVerdict verdict = trace_inclusion(lower, upper);
            if (format == "json") {
                json j;
                j["holds"] = verdict.holds;
                if (verdict.witness) {
                    j["witness"] = json::array();
                    for (const auto& label : verdict.witness->labels()) {
                        j["witness"].push_back(label.str());
                    }
                } else {
                    j["witness"] = nullptr;
                }
                std::cout << j.dump(2) << "\n";
            } else if (verdict.holds) {
                std::cout << "inclusion holds\n";
            } else {
                std::cout << "inclusion fails, witness: " << verdict.witness->str() << "\n";
            }
            return verdict.holds ? 0 : 1;
        }
        if (traces_cmd->parsed()) {
            Automaton a = load_automaton(spec_path);
            auto traces = finite_traces(a, depth);
            std::vector<Trace> ordered(traces.begin(), traces.end());
            std::stable_sort(ordered.begin(), ordered.end(),
                             [](const Trace& x, const Trace& y) { return x.size() < y.size(); });
            for (const auto& trace : ordered) {
                std::cout << trace.str() << "\n";
            }
            return 0;
        }
        if (correspond_cmd->parsed()) {
            Automaton lower = load_automaton(lower_path);
            Automaton upper = load_automaton(upper_path);
            Certificate cert = load_certificate(cert_path);
            Relation rel = relation_of_certificate(cert);
            auto fragments = load_fragments(exec_path);
            if (fragments.size() != 2) {
                std::cerr << "fragment file must contain exactly two fragments\n";
                return 2;
            }
            if (!is_execution_fragment(lower, fragments[0]) ||
                !is_execution_fragment(upper, fragments[1])) {
                std::cerr << "fragments are not valid for the given automata\n";
                return 2;
            }
            auto idx = find_correspondence(fragments[0], fragments[1], rel);
            if (!idx) {
                std::cout << "no correspondence\n";
                return 1;
            }
            std::cout << "correspondence:";
            for (const auto& [i, j] : idx->pairs()) {
                std::cout << " (" << i << "," << j << ")";
            }
            std::cout << "\n";
            return 0;
        }
        if (unfold_cmd->parsed()) {
            Automaton a = load_automaton(spec_path);
            std::size_t d = depth_given ? depth : default_unfold_depth(a);
            Unfolding result = unfold(a, d);
            save_automaton(result.automaton, out_path);
            if (!map_out.empty()) {
                save_certificate(Certificate{RefinementCert{result.last_map}}, map_out);
            }
            if (result.truncated) {
                std::cout << "warning: unfolding truncated at depth " << d << "\n";
            }
            return 0;
        }
        if (superpose_cmd->parsed()) {
            Automaton lower = load_automaton(lower_path);
            Automaton upper = load_automaton(upper_path);
            Relation rel = relation_of_certificate(load_certificate(cert_path));
            Superposition result = superpose(lower, rel, upper);
            save_automaton(result.automaton, out_path);
            if (!pi1_out.empty()) {
                save_certificate(Certificate{RefinementCert{result.pi1}}, pi1_out);
            }
            if (!pi2_out.empty()) {
                save_certificate(Certificate{RefinementCert{result.pi2}}, pi2_out);
            }
            return 0;
        }
        if (vcgen_cmd->parsed()) {
            SpecAst lower = parse_spec(read_file(lower_path));
            SpecAst upper = parse_spec(read_file(upper_path));
            SymbolicCertificate cert =
                parse_symbolic_certificate(read_file(cert_path), lower, upper);
            std::string text;
            std::size_t groups;
            if (kind == "refinement") {
                text = vcgen_refinement(lower, upper, cert);
                groups = 3 + lower.actions.size();
            } else if (kind == "forward") {
                text = vcgen_forward(lower, upper, cert);
                groups = 1 + lower.actions.size();
            } else {
                std::cerr << "vcgen supports refinement and forward kinds\n";
                return 2;
            }
            write_file(out_path, text);
            std::cout << "wrote " << groups << " assertion groups to " << out_path << "\n";
            if (!solver.empty()) {
                return run_solver(solver, out_path, groups);
            }
            return 0;
        }
        if (elaborate_cmd->parsed()) {
            SpecAst spec = parse_spec(read_file(spec_path));
            Automaton a = elaborate_explicit(spec, Bounds{nat_max, seq_max}, elaboration_cap());
            save_automaton(a, out_path);
            std::cout << "elaborated " << a.states().size() << " states, " << a.steps().size()
                      << " steps\n";
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace normsim::cli
