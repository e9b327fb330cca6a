#include "ppid/cli.hpp"

#include "ppid/corpus.hpp"
#include "ppid/decomposition.hpp"
#include "ppid/kelly.hpp"
#include "ppid/verify.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

namespace ppid::cli {

namespace {

struct RunConfig {
    std::string corpus;
    std::string input;
    std::string epsilon = "1/4";
    std::string format;
    double base = 2.0;
    double tolerance = 1e-9;
    bool pointwise = false;
    bool average = false;
    std::string targets;
    std::string given;
    std::string node;
    std::size_t jobs = 1;
    std::size_t lattice_cap = RedundancyLattice::default_cap;
    std::uint64_t seed = 1;
    std::size_t races = 100000;
    std::string wire = "all";
    std::string out;
    std::size_t lattice_n = 0;
    std::string corpus_name;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

/// Fractions and plain decimals both parse exactly ("0.1" is 1/10).
Rational parse_exact(const std::string& text) {
    const auto dot = text.find('.');
    if (dot != std::string::npos) {
        const auto whole = text.substr(0, dot);
        const auto frac = text.substr(dot + 1);
        if ((whole.empty() || all_digits(whole)) && all_digits(frac)) {
            Rational scale = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
            return Rational(boost::multiprecision::cpp_int(whole.empty() ? "0" : whole)) +
                   Rational(boost::multiprecision::cpp_int(frac)) / scale;
        }
    }
    const auto p = Probability::parse(text);
    if (!p.is_exact()) throw Error(fmt::format("'{}' is not an exact number", text));
    return p.rational();
}

/// Component selector: names or 1-based indices.
std::vector<std::size_t> parse_components(const JointDistribution& dist, const std::string& text) {
    std::vector<std::size_t> out;
    const auto& schema = dist.schema();
    for (const auto& item : split_list(text)) {
        std::optional<std::size_t> c;
        for (std::size_t k = 0; k < schema.component_count(); ++k) {
            if (schema.target_components[k].name == item) c = k;
        }
        if (!c && all_digits(item)) {
            const auto k = std::stoul(item);
            if (k >= 1 && k <= schema.component_count()) c = k - 1;
        }
        if (!c) throw Error(fmt::format("unknown target component '{}'", item));
        out.push_back(*c);
    }
    return out;
}

/// Predictor selector: names or 1-based indices; "none" for no wire.
std::optional<SourceEvent> parse_wire(const JointDistribution& dist, const std::string& text) {
    if (text == "none") return std::nullopt;
    if (text == "all") return SourceEvent::full(dist.predictor_count());
    std::uint32_t mask = 0;
    const auto& schema = dist.schema();
    for (const auto& item : split_list(text)) {
        std::optional<std::size_t> v;
        for (std::size_t k = 0; k < schema.predictor_count(); ++k) {
            if (schema.predictors[k].name == item) v = k;
        }
        if (!v && all_digits(item)) {
            const auto k = std::stoul(item);
            if (k >= 1 && k <= schema.predictor_count()) v = k - 1;
        }
        if (!v) throw Error(fmt::format("unknown predictor '{}'", item));
        mask |= 1u << *v;
    }
    if (mask == 0) throw Error("empty wire selection");
    return SourceEvent(mask);
}

JointDistribution load(const RunConfig& cfg, std::ostream& err) {
    if (cfg.corpus.empty() == cfg.input.empty()) throw Error("give exactly one of --corpus or --input");
    auto dist = cfg.corpus.empty() ? load_distribution_file(cfg.input)
                                   : corpus::build(cfg.corpus, parse_exact(cfg.epsilon));
    for (const auto& w : dist.warnings()) err << "warning: " << w << '\n';
    if (dist.dropped_zero_rows() > 0) err << "warning: dropped " << dist.dropped_zero_rows() << " zero-mass rows\n";
    if (dist.predictor_count() > cfg.lattice_cap) {
        throw Error(fmt::format("{} predictors exceed the lattice cap {}; raise --lattice-cap", dist.predictor_count(),
                                cfg.lattice_cap));
    }
    return dist;
}

void check_common(const RunConfig& cfg) {
    if (!(cfg.base > 0.0) || cfg.base == 1.0) throw Error("--base must be positive and not 1");
    if (!(cfg.tolerance > 0.0)) throw Error("--tol must be positive");
    if (cfg.jobs == 0) throw Error("--jobs must be at least 1");
}

std::string format_or(const RunConfig& cfg, const char* fallback) { return cfg.format.empty() ? fallback : cfg.format; }

// ---------------------------------------------------------------------------

int cmd_decompose(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    check_common(cfg);
    const auto dist = load(cfg, err);
    DecompositionOptions opts;
    opts.base = cfg.base;
    opts.lattice_cap = cfg.lattice_cap;
    opts.jobs = cfg.jobs;
    if (!cfg.targets.empty()) opts.target_components = parse_components(dist, cfg.targets);
    if (!cfg.given.empty()) opts.given_components = parse_components(dist, cfg.given);
    const auto table = decompose(dist, opts);

    const auto selection = cfg.pointwise == cfg.average ? AtomSelection::both
                           : cfg.pointwise              ? AtomSelection::pointwise
                                                        : AtomSelection::average;
    const auto format = format_or(cfg, "csv");
    if (format == "csv") {
        write_atoms_csv(out, table, selection);
    } else if (format == "json") {
        write_atoms_json(out, table, selection);
    } else {
        write_atoms_pretty(out, table, selection);
    }
    return exit_ok;
}

int cmd_lattice(const RunConfig& cfg, std::ostream& out) {
    const RedundancyLattice lattice(cfg.lattice_n, cfg.lattice_cap);
    const auto format = format_or(cfg, "pretty");
    if (format == "json") {
        nlohmann::json doc;
        doc["n"] = cfg.lattice_n;
        auto nodes = nlohmann::json::array();
        auto covers = nlohmann::json::array();
        for (std::size_t k = 0; k < lattice.size(); ++k) {
            nodes.push_back({{"node", lattice.node(k).to_string()}, {"rank", lattice.rank(k)}});
            for (auto below : lattice.lower_covers(k)) {
                covers.push_back({lattice.node(below).to_string(), lattice.node(k).to_string()});
            }
        }
        doc["nodes"] = nodes;
        doc["covers"] = covers;
        out << doc.dump(2) << '\n';
        return exit_ok;
    }
    // csv and pretty share the line format: nodes, then cover edges.
    for (const auto& node : lattice.nodes()) out << node.to_string() << '\n';
    for (std::size_t k = 0; k < lattice.size(); ++k) {
        for (auto below : lattice.lower_covers(k)) {
            out << lattice.node(below).to_string() << " -> " << lattice.node(k).to_string() << '\n';
        }
    }
    return exit_ok;
}

int cmd_chainrule(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    check_common(cfg);
    const auto dist = load(cfg, err);
    ChainRuleOptions opts;
    opts.base = cfg.base;
    opts.lattice_cap = cfg.lattice_cap;
    if (!cfg.targets.empty()) {
        const auto comps = parse_components(dist, cfg.targets);
        if (comps.size() != 2) throw Error("--targets must name exactly two components for the chain rule");
        opts.first = comps[0];
        opts.second = comps[1];
    }
    std::optional<LatticeNode> alpha;
    if (!cfg.node.empty()) alpha = LatticeNode::parse(cfg.node);
    const auto report = verify_target_chain_rule(dist, alpha, opts);
    const auto& d = report.distribution;
    const auto& l = *report.lattice;
    const bool ok = report.max_residual <= cfg.tolerance && report.max_atom_residual <= cfg.tolerance;

    const auto format = format_or(cfg, "pretty");
    if (format == "json") {
        nlohmann::json doc;
        doc["components"] = {d.schema().target_components[0].name, d.schema().target_components[1].name};
        doc["max_residual"] = report.max_residual;
        doc["max_atom_residual"] = report.max_atom_residual;
        doc["tolerance"] = cfg.tolerance;
        doc["passed"] = ok;
        auto rows = nlohmann::json::array();
        for (const auto& row : report.rows) {
            rows.push_back({{"realisation", row.realisation},
                            {"node", l.node(row.node).to_string()},
                            {"joint", row.joint},
                            {"first", row.first},
                            {"second_given_first", row.second_given_first},
                            {"second", row.second},
                            {"first_given_second", row.first_given_second}});
        }
        doc["rows"] = rows;
        out << doc.dump(2) << '\n';
    } else if (format == "csv") {
        out << "realisation,node,joint,first,second_given_first,second,first_given_second,residual_first,"
               "residual_second\n";
        for (const auto& row : report.rows) {
            out << row.realisation << ',' << l.node(row.node).to_string() << ',' << format_number(row.joint) << ','
                << format_number(row.first) << ',' << format_number(row.second_given_first) << ','
                << format_number(row.second) << ',' << format_number(row.first_given_second) << ','
                << format_number(row.residual_first_order) << ',' << format_number(row.residual_second_order)
                << '\n';
        }
    } else {
        const auto& c = d.schema().target_components;
        out << fmt::format("target chain rule over ({}, {})\n", c[0].name, c[1].name);
        out << fmt::format("max residual: {}\n", format_number(report.max_residual));
        out << fmt::format("max averaged atom residual: {}\n", format_number(report.max_atom_residual));
        out << fmt::format("{:>4} {:<16} {:>10} {:>10} {:>10} {:>10} {:>10}\n", "row", "node", "joint", c[0].name,
                           c[1].name + "|" + c[0].name, c[1].name, c[0].name + "|" + c[1].name);
        for (const auto& row : report.rows) {
            out << fmt::format("{:>4} {:<16} {:>10.6f} {:>10.6f} {:>10.6f} {:>10.6f} {:>10.6f}\n", row.realisation,
                               l.node(row.node).to_string(), row.joint + 0.0, row.first + 0.0,
                               row.second_given_first + 0.0, row.second + 0.0, row.first_given_second + 0.0);
        }
        out << (ok ? "pass\n" : "FAIL\n");
    }
    return ok ? exit_ok : exit_failed_checks;
}

int cmd_corpus(const RunConfig& cfg, std::ostream& out) {
    write_tsv(out, corpus::build(cfg.corpus_name, parse_exact(cfg.epsilon)));
    return exit_ok;
}

int cmd_kelly(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    check_common(cfg);
    auto dist = load(cfg, err);
    if (!cfg.targets.empty()) dist = compose_targets(dist, parse_components(dist, cfg.targets));
    if (cfg.races == 0) throw Error("--races must be at least 1");
    const auto wire = parse_wire(dist, cfg.wire);
    const auto market = kelly::RaceMarket::fair(dist, wire);
    const auto traj = kelly::simulate_races(market, cfg.races, cfg.seed);

    nlohmann::json doc;
    doc["generator"] = traj.generator;
    doc["seed"] = traj.seed;
    doc["races"] = cfg.races;
    auto names = nlohmann::json::array();
    if (wire) {
        for (auto i : wire->indices()) names.push_back(dist.schema().predictors[i].name);
    }
    doc["wire"] = names;
    doc["analytic_rate"] = traj.analytic_rate;
    doc["empirical_rate"] = traj.empirical_rate;
    doc["rate_without_wire"] = kelly::optimal_doubling_rate(market).value;
    if (wire) {
        const auto v = kelly::value_of_side_information(market);
        doc["value_of_side_information"] = v.gain.value;
        doc["mutual_information"] = v.mutual_information.value;
    }
    const auto& w = traj.log2_wealth;
    nlohmann::json summary;
    summary["final_log2_wealth"] = w.back();
    summary["min_log2_wealth"] = *std::min_element(w.begin(), w.end());
    summary["max_log2_wealth"] = *std::max_element(w.begin(), w.end());
    auto checkpoints = nlohmann::json::array();
    for (std::size_t k = 1; k <= 10; ++k) {
        const auto race = std::max<std::size_t>(1, cfg.races * k / 10);
        checkpoints.push_back({{"race", race}, {"log2_wealth", w[race - 1]}});
    }
    summary["checkpoints"] = checkpoints;
    doc["trajectory_summary"] = summary;
    out << doc.dump(2) << '\n';
    return exit_ok;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    check_common(cfg);
    const auto dist = load(cfg, err);
    VerifyOptions opts;
    opts.tolerance = cfg.tolerance;
    opts.base = cfg.base;
    opts.lattice_cap = cfg.lattice_cap;
    const auto results = run_invariant_suite(dist, opts);
    bool ok = true;
    const auto format = format_or(cfg, "pretty");
    if (format == "json") {
        auto arr = nlohmann::json::array();
        for (const auto& r : results) {
            arr.push_back({{"property", r.name},
                           {"passed", r.passed},
                           {"checks", r.checks},
                           {"violations", r.violations},
                           {"worst", r.worst},
                           {"detail", r.detail}});
        }
        out << nlohmann::json{{"tolerance", cfg.tolerance}, {"results", arr}}.dump(2) << '\n';
    } else if (format == "csv") {
        out << "property,passed,checks,violations,worst\n";
        for (const auto& r : results) {
            out << '"' << r.name << "\"," << (r.passed ? "true" : "false") << ',' << r.checks << ',' << r.violations
                << ',' << format_number(r.worst) << '\n';
        }
    }
    for (const auto& r : results) {
        ok = ok && r.passed;
        if (format == "pretty") {
            out << fmt::format("{}  {} ({} checks)\n", r.passed ? "pass" : "FAIL", r.name, r.checks);
            if (!r.passed) out << fmt::format("      {} violations, worst {}: {}\n", r.violations, r.worst, r.detail);
        }
    }
    return ok ? exit_ok : exit_failed_checks;
}

void add_source(CLI::App* cmd, RunConfig& cfg) {
    auto* corpus = cmd->add_option("--corpus", cfg.corpus, "Built-in example distribution");
    auto* input = cmd->add_option("--input", cfg.input, "Distribution file (.tsv or .json)");
    corpus->excludes(input);
    cmd->add_option("--epsilon", cfg.epsilon, "Error probability for rdnerr");
    cmd->add_option("--lattice-cap", cfg.lattice_cap, "Largest number of predictors accepted");
}

void add_format(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json", "pretty"}));
    cmd->add_option("--out", cfg.out, "Write the artifact to this path");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Pointwise partial information decomposition", "ppid"};
    app.require_subcommand(1);

    auto* decompose_cmd = app.add_subcommand("decompose", "Pointwise and averaged atoms on the redundancy lattice");
    add_source(decompose_cmd, cfg);
    add_format(decompose_cmd, cfg);
    decompose_cmd->add_option("--base", cfg.base, "Logarithm base");
    decompose_cmd->add_flag("--pointwise", cfg.pointwise, "Emit per-realisation atoms");
    decompose_cmd->add_flag("--average", cfg.average, "Emit averaged atoms");
    decompose_cmd->add_option("--targets", cfg.targets, "Target components to decompose (names or 1-based)");
    decompose_cmd->add_option("--given", cfg.given, "Target components to condition on");
    decompose_cmd->add_option("--jobs", cfg.jobs, "Worker threads");

    auto* lattice_cmd = app.add_subcommand("lattice", "Nodes and cover relations of the redundancy lattice");
    lattice_cmd->add_option("n", cfg.lattice_n, "Number of predictors")->required();
    lattice_cmd->add_option("--lattice-cap", cfg.lattice_cap, "Largest n accepted");
    add_format(lattice_cmd, cfg);

    auto* chain_cmd = app.add_subcommand("chainrule", "Check the pointwise target chain rule");
    add_source(chain_cmd, cfg);
    add_format(chain_cmd, cfg);
    chain_cmd->add_option("--targets", cfg.targets, "Two target components, in chain order");
    chain_cmd->add_option("--node", cfg.node, "Restrict to one lattice node, e.g. {1}{2}");
    chain_cmd->add_option("--base", cfg.base, "Logarithm base");
    chain_cmd->add_option("--tol", cfg.tolerance, "Residual tolerance");

    auto* corpus_cmd = app.add_subcommand("corpus", "Print a built-in distribution as TSV");
    corpus_cmd->add_option("name", cfg.corpus_name, "xor, pwunq, rdnerr, tbc, tbep, unq or and")->required();
    corpus_cmd->add_option("--epsilon", cfg.epsilon, "Error probability for rdnerr");
    corpus_cmd->add_option("--out", cfg.out, "Write the artifact to this path");

    auto* kelly_cmd = app.add_subcommand("kelly", "Simulate Kelly betting with side information");
    add_source(kelly_cmd, cfg);
    kelly_cmd->add_option("--races", cfg.races, "Number of races");
    kelly_cmd->add_option("--seed", cfg.seed, "Generator seed");
    kelly_cmd->add_option("--wire", cfg.wire, "Predictors on the wire: names, 1-based indices, all or none");
    kelly_cmd->add_option("--targets", cfg.targets, "Target components forming the race");
    kelly_cmd->add_option("--base", cfg.base, "Logarithm base");
    kelly_cmd->add_option("--out", cfg.out, "Write the artifact to this path");

    auto* verify_cmd = app.add_subcommand("verify", "Run the invariant suite on a distribution");
    add_source(verify_cmd, cfg);
    add_format(verify_cmd, cfg);
    verify_cmd->add_option("--tol", cfg.tolerance, "Violation tolerance");
    verify_cmd->add_option("--base", cfg.base, "Logarithm base");

    std::vector<std::string> argv_storage{"ppid"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help(app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name());
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_invalid;
    }

    std::ostringstream artifact;
    int status = exit_ok;
    try {
        if (*decompose_cmd) status = cmd_decompose(cfg, artifact, err);
        if (*lattice_cmd) status = cmd_lattice(cfg, artifact);
        if (*chain_cmd) status = cmd_chainrule(cfg, artifact, err);
        if (*corpus_cmd) status = cmd_corpus(cfg, artifact);
        if (*kelly_cmd) status = cmd_kelly(cfg, artifact, err);
        if (*verify_cmd) status = cmd_verify(cfg, artifact, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_invalid;
    }

    if (cfg.out.empty()) {
        out << artifact.str();
    } else {
        std::ofstream file(cfg.out, std::ios::binary);
        if (!(file << artifact.str())) {
            err << "error: cannot write " << cfg.out << '\n';
            return exit_invalid;
        }
    }
    return status;
}

}  // namespace ppid::cli
