#include "ppid/decomposition.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <thread>

namespace ppid {

namespace {

std::vector<std::size_t> all_components(const JointDistribution& dist) {
    std::vector<std::size_t> out(dist.component_count());
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = c;
    return out;
}

std::vector<std::size_t> range(std::size_t first, std::size_t count) {
    std::vector<std::size_t> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = first + i;
    return out;
}

/// min over alpha of h(a | conditioning components of r).
InfoValue min_entropy(const JointDistribution& dist, const LatticeNode& alpha, const Realisation& r,
                      const std::vector<std::size_t>& conditioning, double base) {
    const auto given = dist.target_event(r, conditioning);
    double best = std::numeric_limits<double>::infinity();
    for (auto a : alpha.sources()) {
        best = std::min(best, conditional_entropy(dist, dist.source_event(r, a), given, base).value);
    }
    return {best, base};
}

void check_node(const JointDistribution& dist, const LatticeNode& alpha) {
    if (alpha.span() > dist.predictor_count()) {
        throw Error(fmt::format("node {} refers to predictors beyond the {} available", alpha.to_string(),
                                dist.predictor_count()));
    }
}

std::vector<std::size_t> merged(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    auto out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

/// h(a | conditioning) for every source event of the lattice, at realisation r.
SourceValues source_entropies(const JointDistribution& dist, const RedundancyLattice& lattice, const Realisation& r,
                              const std::vector<std::size_t>& conditioning, double base) {
    SourceValues values;
    const auto given = dist.target_event(r, conditioning);
    for (auto a : lattice.source_events()) {
        values[a.mask()] = conditional_entropy(dist, dist.source_event(r, a), given, base).value;
    }
    return values;
}

NodeValues node_minima(const RedundancyLattice& lattice, const SourceValues& values) {
    NodeValues out(lattice.size());
    for (std::size_t i = 0; i < lattice.size(); ++i) out[i] = min_over(lattice.node(i), values);
    return out;
}

double snap(double x, double threshold) { return std::abs(x) <= threshold ? 0.0 : x; }

}  // namespace

InfoValue rmin_plus(const JointDistribution& dist, const LatticeNode& alpha, const Realisation& r, double base) {
    check_node(dist, alpha);
    return min_entropy(dist, alpha, r, {}, base);
}

InfoValue rmin_minus(const JointDistribution& dist, const LatticeNode& alpha, const Realisation& r, double base) {
    check_node(dist, alpha);
    return min_entropy(dist, alpha, r, all_components(dist), base);
}

InfoValue rmin_plus_conditional(const JointDistribution& dist, const LatticeNode& alpha, const Realisation& r,
                                const std::vector<std::size_t>& given, double base) {
    check_node(dist, alpha);
    return min_entropy(dist, alpha, r, given, base);
}

InfoValue rmin_minus_conditional(const JointDistribution& dist, const LatticeNode& alpha, const Realisation& r,
                                 const std::vector<std::size_t>& targets, const std::vector<std::size_t>& given,
                                 double base) {
    check_node(dist, alpha);
    return min_entropy(dist, alpha, r, merged(given, targets), base);
}

InfoValue rmin_recombined(const JointDistribution& dist, const LatticeNode& alpha, const Realisation& r,
                          double base) {
    return {rmin_plus(dist, alpha, r, base).value - rmin_minus(dist, alpha, r, base).value, base};
}

InfoValue rmin_recombined_conditional(const JointDistribution& dist, const LatticeNode& alpha, const Realisation& r,
                                      const std::vector<std::size_t>& targets, const std::vector<std::size_t>& given,
                                      double base) {
    return {rmin_plus_conditional(dist, alpha, r, given, base).value -
                rmin_minus_conditional(dist, alpha, r, targets, given, base).value,
            base};
}

// ---------------------------------------------------------------------------

std::string AtomTable::node_label(std::size_t node) const {
    const auto text = lattice->node(node).to_string();
    if (lattice->predictor_count() == 2) {
        if (text == "{1}{2}") return "R";
        if (text == "{1}") return "U1";
        if (text == "{2}") return "U2";
        if (text == "{12}") return "C";
    }
    return text;
}

AtomTable decompose(const JointDistribution& dist, const DecompositionOptions& options) {
    const auto n = dist.predictor_count();
    if (n == 0) throw Error("decomposition needs at least one predictor");
    if (!dist.schema().has_target()) throw Error("decomposition needs a target");

    const auto targets = options.target_components.empty() ? all_components(dist) : options.target_components;
    const auto& given = options.given_components;
    std::set<std::size_t> seen;
    for (auto c : merged(targets, given)) {
        if (c >= dist.component_count()) throw Error(fmt::format("unknown target component {}", c));
        if (!seen.insert(c).second) throw Error("a target component is both decomposed and conditioned on");
    }

    auto lattice = std::make_shared<const RedundancyLattice>(n, options.lattice_cap);
    auto projected = compose_targets(dist, merged(targets, given));
    const auto target_idx = range(0, targets.size());
    const auto given_idx = range(targets.size(), given.size());
    const auto both_idx = range(0, targets.size() + given.size());
    const bool exact = projected.is_exact();
    const double threshold = exact ? options.zero_snap : 0.0;

    const auto& support = projected.support();
    std::vector<RealisationAtoms> rows(support.size());

    auto evaluate = [&](std::size_t i) {
        const auto& r = support[i];
        const auto plus = node_minima(*lattice, source_entropies(projected, *lattice, r, given_idx, options.base));
        const auto minus = node_minima(*lattice, source_entropies(projected, *lattice, r, both_idx, options.base));
        const auto pi_plus = mobius_invert(*lattice, plus);
        const auto pi_minus = mobius_invert(*lattice, minus);
        RealisationAtoms row{r, std::vector<NodeAtoms>(lattice->size())};
        for (std::size_t k = 0; k < lattice->size(); ++k) {
            auto& a = row.nodes[k];
            a.r_plus = plus[k];
            a.r_minus = minus[k];
            a.pi_plus = snap(pi_plus[k], threshold);
            a.pi_minus = snap(pi_minus[k], threshold);
            a.pi = snap(pi_plus[k] - pi_minus[k], threshold);
        }
        rows[i] = std::move(row);
    };

    const auto jobs = std::max<std::size_t>(1, std::min(options.jobs, support.size()));
    if (jobs == 1) {
        for (std::size_t i = 0; i < support.size(); ++i) evaluate(i);
    } else {
        std::vector<std::thread> workers;
        std::vector<std::exception_ptr> failures(jobs);
        for (std::size_t w = 0; w < jobs; ++w) {
            workers.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < support.size(); i += jobs) evaluate(i);
                } catch (...) {
                    failures[w] = std::current_exception();
                }
            });
        }
        for (auto& t : workers) t.join();
        for (auto& f : failures) {
            if (f) std::rethrow_exception(f);
        }
    }

    std::vector<NodeAtoms> averages(lattice->size());
    for (std::size_t k = 0; k < lattice->size(); ++k) {
        CompensatedSum rp, rm, pp, pm, pi;
        for (const auto& row : rows) {
            const double p = row.realisation.probability.to_double();
            const auto& a = row.nodes[k];
            rp.add(p * a.r_plus);
            rm.add(p * a.r_minus);
            pp.add(p * a.pi_plus);
            pm.add(p * a.pi_minus);
            pi.add(p * a.pi);
        }
        averages[k] = {rp.value(), rm.value(), snap(pp.value(), threshold), snap(pm.value(), threshold),
                       snap(pi.value(), threshold)};
    }

    return AtomTable{std::move(lattice), std::move(projected), targets.size(), given.size(), std::move(rows),
                     std::move(averages), options.base, exact};
}

BivariateAtoms bivariate_averages(const AtomTable& table) {
    if (table.lattice->predictor_count() != 2) throw Error("bivariate atoms need exactly two predictors");
    const auto& l = *table.lattice;
    auto pi = [&](const char* node) { return table.averages[l.index_of(LatticeNode::parse(node))].pi; };
    return {pi("{1}{2}"), pi("{1}"), pi("{2}"), pi("{12}")};
}

// ---------------------------------------------------------------------------

ChainRuleReport verify_target_chain_rule(const JointDistribution& dist, const std::optional<LatticeNode>& alpha,
                                         const ChainRuleOptions& options) {
    if (dist.component_count() < 2) throw Error("target chain rule needs a composite target");
    if (options.first == options.second) throw Error("chain rule components must differ");
    auto projected = compose_targets(dist, std::vector<std::size_t>{options.first, options.second});
    auto lattice = std::make_shared<const RedundancyLattice>(dist.predictor_count(), options.lattice_cap);

    std::vector<std::size_t> nodes;
    if (alpha) {
        nodes.push_back(lattice->index_of(*alpha));
    } else {
        for (std::size_t k = 0; k < lattice->size(); ++k) nodes.push_back(k);
    }

    const double b = options.base;
    ChainRuleReport report{projected, lattice, {}, 0.0, 0.0};
    const auto& support = projected.support();
    for (std::size_t i = 0; i < support.size(); ++i) {
        const auto& r = support[i];
        const auto h = node_minima(*lattice, source_entropies(projected, *lattice, r, {}, b));
        const auto h1 = node_minima(*lattice, source_entropies(projected, *lattice, r, {0}, b));
        const auto h2 = node_minima(*lattice, source_entropies(projected, *lattice, r, {1}, b));
        const auto h12 = node_minima(*lattice, source_entropies(projected, *lattice, r, {0, 1}, b));
        for (auto k : nodes) {
            ChainRuleRow row;
            row.realisation = i;
            row.node = k;
            row.joint = h[k] - h12[k];
            row.first = h[k] - h1[k];
            row.second_given_first = h1[k] - h12[k];
            row.second = h[k] - h2[k];
            row.first_given_second = h2[k] - h12[k];
            row.residual_first_order = std::abs(row.joint - row.first - row.second_given_first);
            row.residual_second_order = std::abs(row.joint - row.second - row.first_given_second);
            report.max_residual =
                std::max({report.max_residual, row.residual_first_order, row.residual_second_order});
            report.rows.push_back(row);
        }
    }

    auto run = [&](std::vector<std::size_t> targets, std::vector<std::size_t> given) {
        DecompositionOptions o;
        o.base = b;
        o.lattice_cap = options.lattice_cap;
        o.target_components = std::move(targets);
        o.given_components = std::move(given);
        return decompose(projected, o);
    };
    const auto joint = run({0, 1}, {});
    const auto first = run({0}, {});
    const auto second_given_first = run({1}, {0});
    const auto second = run({1}, {});
    const auto first_given_second = run({0}, {1});
    for (auto k : nodes) {
        const double j = joint.averages[k].pi;
        report.max_atom_residual =
            std::max({report.max_atom_residual, std::abs(j - first.averages[k].pi - second_given_first.averages[k].pi),
                      std::abs(j - second.averages[k].pi - first_given_second.averages[k].pi)});
    }
    return report;
}

InvarianceReport two_event_invariance_check(const JointDistribution& dist, const LatticeNode& alpha,
                                            std::size_t realisation, double base) {
    const auto& support = dist.support();
    if (realisation >= support.size()) throw Error("realisation index out of range");
    const auto& r = support[realisation];
    InvarianceReport report;
    report.r_plus = rmin_plus(dist, alpha, r, base).value;
    report.r_minus = rmin_minus(dist, alpha, r, base).value;

    const auto coarse = coarsen_target_to_two_events(dist, r.target);
    const auto idx = coarse.find(r.predictors, {0});
    if (!idx) throw Error("coarsened distribution lost the realisation");
    const auto& rc = coarse.support()[*idx];
    report.r_plus_coarse = rmin_plus(coarse, alpha, rc, base).value;
    report.r_minus_coarse = rmin_minus(coarse, alpha, rc, base).value;
    report.max_difference = std::max(std::abs(report.r_plus - report.r_plus_coarse),
                                     std::abs(report.r_minus - report.r_minus_coarse));
    return report;
}

// ---------------------------------------------------------------------------

std::string format_number(double x) {
    if (x == 0.0) return "0";  // also folds -0
    return fmt::format("{:.12g}", x);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> event_names(const AtomTable& table) {
    const auto& s = table.distribution.schema();
    std::vector<std::string> names;
    for (const auto& p : s.predictors) names.push_back(p.name);
    for (std::size_t c = 0; c < s.component_count(); ++c) names.push_back(s.target_components[c].name);
    return names;
}

std::vector<std::string> event_labels(const AtomTable& table, const Realisation& r) {
    const auto& s = table.distribution.schema();
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < r.predictors.size(); ++i) labels.push_back(s.predictors[i].alphabet[r.predictors[i]]);
    for (std::size_t c = 0; c < r.target.size(); ++c) labels.push_back(s.target_components[c].alphabet[r.target[c]]);
    return labels;
}

void summary_csv(std::ostream& out, const AtomTable& table) {
    for (std::size_t k = 0; k < table.lattice->size(); ++k) out << (k ? "," : "") << csv_field(table.node_label(k));
    out << '\n';
    for (std::size_t k = 0; k < table.lattice->size(); ++k) out << (k ? "," : "") << format_number(table.averages[k].pi);
    out << '\n';
}

nlohmann::json atoms_json(const NodeAtoms& a) {
    return {{"r_plus", a.r_plus}, {"r_minus", a.r_minus}, {"pi_plus", a.pi_plus}, {"pi_minus", a.pi_minus},
            {"pi", a.pi}};
}

}  // namespace

void write_atoms_csv(std::ostream& out, const AtomTable& table, AtomSelection selection) {
    if (selection != AtomSelection::average) {
        out << "p";
        for (const auto& name : event_names(table)) out << ',' << csv_field(name);
        out << ",node,r_plus,r_minus,pi_plus,pi_minus,pi\n";
        for (const auto& row : table.realisations) {
            const auto labels = event_labels(table, row.realisation);
            for (std::size_t k = 0; k < table.lattice->size(); ++k) {
                const auto& a = row.nodes[k];
                out << row.realisation.probability.to_string();
                for (const auto& l : labels) out << ',' << csv_field(l);
                out << ',' << table.lattice->node(k).to_string() << ',' << format_number(a.r_plus) << ','
                    << format_number(a.r_minus) << ',' << format_number(a.pi_plus) << ','
                    << format_number(a.pi_minus) << ',' << format_number(a.pi) << '\n';
            }
        }
    }
    if (selection == AtomSelection::both) out << '\n';
    if (selection != AtomSelection::pointwise) summary_csv(out, table);
}

void write_atoms_json(std::ostream& out, const AtomTable& table, AtomSelection selection) {
    const auto& l = *table.lattice;
    nlohmann::json doc;
    doc["base"] = table.base;
    doc["mode"] = table.exact ? "rational" : "decimal";
    doc["variables"] = event_names(table);
    doc["target_components"] = table.target_count;
    doc["given_components"] = table.given_count;
    auto nodes = nlohmann::json::array();
    for (std::size_t k = 0; k < l.size(); ++k) nodes.push_back({{"node", l.node(k).to_string()}, {"label", table.node_label(k)}});
    doc["nodes"] = nodes;

    if (selection != AtomSelection::average) {
        auto rows = nlohmann::json::array();
        for (const auto& row : table.realisations) {
            nlohmann::json r;
            r["p"] = row.realisation.probability.to_string();
            r["events"] = event_labels(table, row.realisation);
            auto atoms = nlohmann::json::object();
            for (std::size_t k = 0; k < l.size(); ++k) atoms[l.node(k).to_string()] = atoms_json(row.nodes[k]);
            r["atoms"] = atoms;
            rows.push_back(r);
        }
        doc["realisations"] = rows;
    }
    if (selection != AtomSelection::pointwise) {
        auto avg = nlohmann::json::object();
        for (std::size_t k = 0; k < l.size(); ++k) avg[l.node(k).to_string()] = atoms_json(table.averages[k]);
        doc["averages"] = avg;
        auto summary = nlohmann::json::object();
        for (std::size_t k = 0; k < l.size(); ++k) summary[table.node_label(k)] = table.averages[k].pi;
        doc["summary"] = summary;
    }
    out << doc.dump(2) << '\n';
}

void write_atoms_pretty(std::ostream& out, const AtomTable& table, AtomSelection selection) {
    const auto& l = *table.lattice;
    const auto names = event_names(table);
    auto header = [&] {
        out << fmt::format("  {:<16} {:>6} {:>10} {:>10} {:>10} {:>10} {:>10}\n", "node", "atom", "r+", "r-", "pi+",
                           "pi-", "pi");
    };
    auto line = [&](std::size_t k, const NodeAtoms& a) {
        out << fmt::format("  {:<16} {:>6} {:>10.6f} {:>10.6f} {:>10.6f} {:>10.6f} {:>10.6f}\n", l.node(k).to_string(),
                           l.predictor_count() == 2 ? table.node_label(k) : "", a.r_plus + 0.0, a.r_minus + 0.0,
                           a.pi_plus + 0.0, a.pi_minus + 0.0, a.pi + 0.0);
    };
    if (selection != AtomSelection::average) {
        for (const auto& row : table.realisations) {
            const auto labels = event_labels(table, row.realisation);
            out << "p=" << row.realisation.probability.to_string();
            for (std::size_t i = 0; i < labels.size(); ++i) out << "  " << names[i] << '=' << labels[i];
            out << '\n';
            header();
            for (std::size_t k = 0; k < l.size(); ++k) line(k, row.nodes[k]);
            out << '\n';
        }
    }
    if (selection != AtomSelection::pointwise) {
        out << "Expected values (base " << format_number(table.base) << ")\n";
        header();
        for (std::size_t k = 0; k < l.size(); ++k) line(k, table.averages[k]);
        if (l.predictor_count() == 2) {
            const auto b = bivariate_averages(table);
            out << fmt::format("\nR = {}   U1 = {}   U2 = {}   C = {}\n", format_number(b.redundant),
                               format_number(b.unique_first), format_number(b.unique_second),
                               format_number(b.complementary));
        }
    }
}

}  // namespace ppid
