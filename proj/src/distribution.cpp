#include "ppid/distribution.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

namespace ppid {

// ---------------------------------------------------------------------------
// Variable / schema

std::optional<std::size_t> Variable::find(std::string_view label) const {
    auto it = std::find(alphabet.begin(), alphabet.end(), label);
    if (it == alphabet.end()) return std::nullopt;
    return static_cast<std::size_t>(it - alphabet.begin());
}

std::size_t Variable::index_of(std::string_view label) const {
    if (auto i = find(label)) return *i;
    throw Error(fmt::format("label '{}' is not in the alphabet of '{}'", label, name));
}

const Variable& VariableSchema::variable(std::size_t index) const {
    if (index < predictors.size()) return predictors[index];
    if (index < variable_count()) return target_components[index - predictors.size()];
    throw Error(fmt::format("variable index {} out of range", index));
}

std::optional<std::size_t> VariableSchema::find_variable(std::string_view name) const {
    for (std::size_t i = 0; i < variable_count(); ++i) {
        if (variable(i).name == name) return i;
    }
    if (has_target() && !composite() && name == target_name) return predictors.size();
    return std::nullopt;
}

std::vector<std::string> VariableSchema::target_alphabet() const {
    std::vector<std::string> labels{""};
    for (std::size_t c = 0; c < target_components.size(); ++c) {
        std::vector<std::string> next;
        for (const auto& prefix : labels) {
            for (const auto& l : target_components[c].alphabet) {
                next.push_back(c == 0 ? l : prefix + "," + l);
            }
        }
        labels = std::move(next);
    }
    if (target_components.empty()) labels.clear();
    return labels;
}

void VariableSchema::validate() const {
    if (variable_count() == 0) throw Error("schema has no variables");
    std::set<std::string> names;
    for (std::size_t i = 0; i < variable_count(); ++i) {
        const auto& v = variable(i);
        if (v.name.empty()) throw Error(fmt::format("variable {} has an empty name", i));
        if (v.alphabet.empty()) throw Error(fmt::format("variable '{}' has an empty alphabet", v.name));
        if (!names.insert(v.name).second) throw Error(fmt::format("duplicate variable name '{}'", v.name));
        std::set<std::string> labels(v.alphabet.begin(), v.alphabet.end());
        if (labels.size() != v.alphabet.size()) {
            throw Error(fmt::format("variable '{}' has duplicate labels", v.name));
        }
    }
    if (composite() && names.count(target_name) != 0) {
        throw Error(fmt::format("target name '{}' collides with a variable name", target_name));
    }
}

// ---------------------------------------------------------------------------
// SourceEvent

SourceEvent::SourceEvent(std::uint32_t mask) : mask_(mask) {
    if (mask == 0) throw Error("source event must be nonempty");
    if (mask >> max_predictors) throw Error("source event index exceeds the predictor limit");
}

SourceEvent SourceEvent::of(std::initializer_list<std::size_t> zero_based_indices) {
    std::uint32_t mask = 0;
    for (auto i : zero_based_indices) {
        if (i >= max_predictors) throw Error("source event index exceeds the predictor limit");
        mask |= 1u << i;
    }
    return SourceEvent(mask);
}

SourceEvent SourceEvent::full(std::size_t n) {
    if (n == 0 || n > max_predictors) throw Error("invalid predictor count");
    return SourceEvent(static_cast<std::uint32_t>((1ull << n) - 1));
}

std::size_t SourceEvent::size() const { return static_cast<std::size_t>(std::popcount(mask_)); }

std::vector<std::size_t> SourceEvent::indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < max_predictors; ++i) {
        if (contains(i)) out.push_back(i);
    }
    return out;
}

std::string SourceEvent::to_string() const {
    std::string s;
    for (auto i : indices()) s += std::to_string(i + 1);
    return s;
}

std::strong_ordering operator<=>(SourceEvent a, SourceEvent b) {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    auto ia = a.indices();
    auto ib = b.indices();
    return std::lexicographical_compare_three_way(ia.begin(), ia.end(), ib.begin(), ib.end());
}

// ---------------------------------------------------------------------------
// JointDistribution

JointDistribution JointDistribution::from_rows(VariableSchema schema, const std::vector<OutcomeRow>& rows) {
    schema.validate();
    const auto width = schema.variable_count();

    std::map<std::vector<std::size_t>, std::size_t> slot;
    std::vector<OutcomeRow> merged;
    std::vector<std::string> warnings;
    bool exact = true;

    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.labels.size() != width) {
            throw Error(fmt::format("row {}: expected {} labels, got {}", r + 1, width, row.labels.size()));
        }
        for (std::size_t v = 0; v < width; ++v) {
            if (row.labels[v] >= schema.variable(v).alphabet.size()) {
                throw Error(fmt::format("row {}: label index out of range for '{}'", r + 1,
                                        schema.variable(v).name));
            }
        }
        exact = exact && row.probability.is_exact();
        auto [it, inserted] = slot.try_emplace(row.labels, merged.size());
        if (inserted) {
            merged.push_back(row);
        } else {
            merged[it->second].probability += row.probability;
            warnings.push_back(fmt::format("row {}: duplicate outcome merged", r + 1));
        }
    }

    JointDistribution dist;
    dist.schema_ = std::move(schema);
    dist.exact_ = exact;
    dist.warnings_ = std::move(warnings);

    const auto n = dist.schema_.predictor_count();
    Probability total = Probability::zero();
    for (auto& row : merged) {
        if (!exact) row.probability = Probability(row.probability.to_double());
        if (row.probability.is_zero()) {
            ++dist.dropped_zero_rows_;
            continue;
        }
        if (!row.probability.is_positive()) {
            throw Error(fmt::format("outcome has non-positive probability {}", row.probability.to_string()));
        }
        total += row.probability;
        Realisation real;
        real.predictors.assign(row.labels.begin(), row.labels.begin() + static_cast<std::ptrdiff_t>(n));
        real.target.assign(row.labels.begin() + static_cast<std::ptrdiff_t>(n), row.labels.end());
        real.probability = row.probability;
        dist.support_.push_back(std::move(real));
    }
    if (dist.dropped_zero_rows_ > 0) {
        dist.warnings_.push_back(fmt::format("dropped {} zero-probability row(s)", dist.dropped_zero_rows_));
    }
    if (dist.support_.empty()) throw Error("distribution has empty support");
    if (exact) {
        if (total.rational() != 1) {
            throw Error(fmt::format("probabilities sum to {}, expected exactly 1", total.to_string()));
        }
    } else if (std::abs(total.to_double() - 1.0) > decimal_tolerance) {
        throw Error(fmt::format("probabilities sum to {:.12g}, expected 1", total.to_double()));
    }
    if (exact) dist.scale_masses();
    return dist;
}

void JointDistribution::scale_masses() {
    using boost::multiprecision::cpp_int;
    const cpp_int limit = cpp_int(1) << 62;
    cpp_int lcm = 1;
    for (const auto& r : support_) {
        lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(r.probability.rational()));
        if (lcm >= limit) return;
    }
    std::vector<std::int64_t> scaled;
    for (const auto& r : support_) {
        const auto& q = r.probability.rational();
        scaled.push_back(static_cast<std::int64_t>(boost::multiprecision::numerator(q) * lcm /
                                                   boost::multiprecision::denominator(q)));
    }
    scaled_ = std::move(scaled);
    denominator_ = static_cast<std::int64_t>(lcm);
}

Probability JointDistribution::probability(const Event& event) const {
    for (const auto& vv : event) {
        if (vv.variable >= schema_.variable_count()) throw Error("event refers to an unknown variable");
    }
    auto matches = [&](const Realisation& r) {
        for (const auto& vv : event) {
            if (r.label(vv.variable) != vv.label) return false;
        }
        return true;
    };
    if (!scaled_.empty()) {
        std::int64_t sum = 0;
        for (std::size_t i = 0; i < support_.size(); ++i) {
            if (matches(support_[i])) sum += scaled_[i];
        }
        return Probability(Rational(sum, denominator_));
    }
    Probability total = exact_ ? Probability::zero() : Probability(0.0);
    for (const auto& r : support_) {
        bool match = std::all_of(event.begin(), event.end(),
                                 [&](const VariableValue& vv) { return r.label(vv.variable) == vv.label; });
        if (match) total += r.probability;
    }
    return total;
}

Probability JointDistribution::total_mass() const { return probability({}); }

Event JointDistribution::source_event(const Realisation& r, SourceEvent source) const {
    Event e;
    for (auto i : source.indices()) {
        if (i >= predictor_count()) throw Error("source event refers to a predictor beyond n");
        e.push_back({i, r.predictors[i]});
    }
    return e;
}

Event JointDistribution::target_event(const Realisation& r, const std::vector<std::size_t>& components) const {
    Event e;
    for (auto c : components) {
        if (c >= component_count()) throw Error(fmt::format("unknown target component {}", c));
        e.push_back({schema_.component_variable(c), r.target[c]});
    }
    return e;
}

Event JointDistribution::target_event(const Realisation& r) const {
    Event e;
    for (std::size_t c = 0; c < component_count(); ++c) e.push_back({schema_.component_variable(c), r.target[c]});
    return e;
}

std::string JointDistribution::label(std::size_t variable, std::size_t label_index) const {
    return schema_.variable(variable).alphabet.at(label_index);
}

std::string JointDistribution::target_label(const Realisation& r) const {
    std::string s;
    for (std::size_t c = 0; c < r.target.size(); ++c) {
        if (c) s += ',';
        s += schema_.target_components[c].alphabet[r.target[c]];
    }
    return s;
}

std::optional<std::size_t> JointDistribution::find(const std::vector<std::size_t>& predictors,
                                                   const std::vector<std::size_t>& target) const {
    for (std::size_t i = 0; i < support_.size(); ++i) {
        if (support_[i].predictors == predictors && support_[i].target == target) return i;
    }
    return std::nullopt;
}

Event concat(Event a, const Event& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// ---------------------------------------------------------------------------
// Ingestion

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::string> split_fields(const std::string& line) {
    if (line.find('\t') != std::string::npos) return split(line, '\t');
    std::istringstream is(line);
    std::vector<std::string> out;
    for (std::string f; is >> f;) out.push_back(f);
    return out;
}

std::string strip_cr(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
    return s;
}

std::size_t intern(Variable& v, const std::string& label) {
    if (auto i = v.find(label)) return *i;
    v.alphabet.push_back(label);
    return v.alphabet.size() - 1;
}

JointDistribution load_tsv(std::istream& in) {
    std::vector<std::string> header;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> raw;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (line[0] == '#') {
            if (header.empty() && raw.empty() && line.rfind("#p", 0) == 0) {
                header = split_fields(line.substr(1));
            }
            continue;
        }
        raw.emplace_back(line_no, split_fields(line));
    }
    if (raw.empty()) throw Error("no data rows");

    const auto width = raw.front().second.size();
    if (width < 2) throw Error(fmt::format("line {}: need a probability and at least one label", raw.front().first));
    if (!header.empty() && header.size() != width) {
        throw Error(fmt::format("header has {} columns, data rows have {}", header.size(), width));
    }
    const std::size_t n = width - 2;
    const std::size_t components = split(raw.front().second.back(), ',').size();

    VariableSchema schema;
    for (std::size_t i = 0; i < n; ++i) {
        schema.predictors.push_back({header.empty() ? fmt::format("s{}", i + 1) : header[i + 1], {}});
    }
    std::vector<std::string> component_names;
    if (!header.empty()) component_names = split(header.back(), ',');
    if (components == 1) {
        schema.target_name = header.empty() ? "t" : header.back();
        schema.target_components.push_back({schema.target_name, {}});
    } else {
        if (!header.empty() && component_names.size() != components) {
            throw Error("header target components do not match the data rows");
        }
        schema.target_name = "t";
        for (std::size_t c = 0; c < components; ++c) {
            schema.target_components.push_back(
                {header.empty() ? fmt::format("t{}", c + 1) : component_names[c], {}});
        }
    }

    std::vector<OutcomeRow> rows;
    for (const auto& [no, fields] : raw) {
        if (fields.size() != width) {
            throw Error(fmt::format("line {}: expected {} columns, got {}", no, width, fields.size()));
        }
        OutcomeRow row;
        try {
            row.probability = Probability::parse(fields[0]);
        } catch (const std::exception& e) {
            throw Error(fmt::format("line {}: {}", no, e.what()));
        }
        for (std::size_t i = 0; i < n; ++i) row.labels.push_back(intern(schema.predictors[i], fields[i + 1]));
        auto parts = split(fields.back(), ',');
        if (parts.size() != components) {
            throw Error(fmt::format("line {}: expected {} target components, got {}", no, components, parts.size()));
        }
        for (std::size_t c = 0; c < components; ++c) {
            row.labels.push_back(intern(schema.target_components[c], parts[c]));
        }
        rows.push_back(std::move(row));
    }
    return JointDistribution::from_rows(std::move(schema), rows);
}

Variable parse_variable(const nlohmann::json& j, const std::string& fallback_name) {
    Variable v;
    if (j.is_string()) {
        v.name = j.get<std::string>();
        return v;
    }
    if (!j.is_object()) throw Error("variable entries must be strings or objects");
    v.name = j.value("name", fallback_name);
    if (j.contains("alphabet")) {
        for (const auto& l : j.at("alphabet")) v.alphabet.push_back(l.is_string() ? l.get<std::string>() : l.dump());
    }
    return v;
}

std::string json_label(const nlohmann::json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

JointDistribution load_json(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(fmt::format("malformed JSON: {}", e.what()));
    }
    if (!doc.is_object() || !doc.contains("mass")) throw Error("JSON input needs a 'mass' array");

    VariableSchema schema;
    std::vector<bool> declared;
    if (doc.contains("schema")) {
        const auto& s = doc.at("schema");
        std::size_t i = 0;
        for (const auto& p : s.value("predictors", nlohmann::json::array())) {
            schema.predictors.push_back(parse_variable(p, fmt::format("s{}", ++i)));
        }
        if (s.contains("target")) {
            const auto& t = s.at("target");
            if (t.is_object() && t.contains("components")) {
                schema.target_name = t.value("name", "t");
                std::size_t c = 0;
                for (const auto& comp : t.at("components")) {
                    schema.target_components.push_back(parse_variable(comp, fmt::format("t{}", ++c)));
                }
            } else {
                auto v = parse_variable(t, "t");
                schema.target_name = v.name;
                schema.target_components.push_back(std::move(v));
            }
        }
    }

    const auto& mass = doc.at("mass");
    if (!mass.is_array() || mass.empty()) throw Error("'mass' must be a nonempty array");
    if (schema.predictors.empty() && schema.target_components.empty()) {
        const auto width = mass.front().at("outcome").size();
        if (width < 2) throw Error("outcomes need at least one predictor and a target");
        for (std::size_t i = 0; i + 1 < width; ++i) schema.predictors.push_back({fmt::format("s{}", i + 1), {}});
        auto parts = split(json_label(mass.front().at("outcome").back()), ',');
        if (parts.size() == 1) {
            schema.target_components.push_back({"t", {}});
        } else {
            for (std::size_t c = 0; c < parts.size(); ++c) {
                schema.target_components.push_back({fmt::format("t{}", c + 1), {}});
            }
        }
    }
    const auto n = schema.predictor_count();
    const auto m = schema.component_count();
    // Variables with a declared alphabet reject unknown labels; the rest grow.
    for (std::size_t v = 0; v < n + m; ++v) declared.push_back(!schema.variable(v).alphabet.empty());

    std::vector<OutcomeRow> rows;
    for (std::size_t r = 0; r < mass.size(); ++r) {
        const auto& entry = mass[r];
        if (!entry.is_object() || !entry.contains("outcome") || !entry.contains("p")) {
            throw Error(fmt::format("mass entry {} needs 'outcome' and 'p'", r + 1));
        }
        const auto& outcome = entry.at("outcome");
        std::vector<std::string> labels;
        for (const auto& l : outcome) labels.push_back(json_label(l));
        if (labels.size() == n + 1 && m > 1) {
            auto parts = split(labels.back(), ',');
            labels.pop_back();
            labels.insert(labels.end(), parts.begin(), parts.end());
        }
        if (labels.size() != n + m) {
            throw Error(fmt::format("mass entry {}: expected {} labels, got {}", r + 1, n + m, labels.size()));
        }
        OutcomeRow row;
        const auto& p = entry.at("p");
        try {
            row.probability = p.is_string() ? Probability::parse(p.get<std::string>())
                              : p.is_number_integer() ? Probability(Rational(p.get<long long>()))
                                                      : Probability(p.get<double>());
        } catch (const std::exception& e) {
            throw Error(fmt::format("mass entry {}: {}", r + 1, e.what()));
        }
        for (std::size_t v = 0; v < n + m; ++v) {
            Variable& var = v < n ? schema.predictors[v] : schema.target_components[v - n];
            if (declared[v]) {
                row.labels.push_back(var.index_of(labels[v]));
            } else {
                row.labels.push_back(intern(var, labels[v]));
            }
        }
        rows.push_back(std::move(row));
    }
    return JointDistribution::from_rows(std::move(schema), rows);
}

}  // namespace

JointDistribution load_distribution(std::istream& in, InputFormat format) {
    return format == InputFormat::tsv ? load_tsv(in) : load_json(in);
}

JointDistribution load_distribution_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(fmt::format("cannot open '{}'", path));
    const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
    return load_distribution(in, json ? InputFormat::json : InputFormat::tsv);
}

void write_tsv(std::ostream& out, const JointDistribution& dist) {
    const auto& s = dist.schema();
    out << "#p";
    for (const auto& p : s.predictors) out << '\t' << p.name;
    if (s.has_target()) {
        out << '\t';
        if (s.composite()) {
            for (std::size_t c = 0; c < s.component_count(); ++c) {
                if (c) out << ',';
                out << s.target_components[c].name;
            }
        } else {
            out << s.target_name;
        }
    }
    out << '\n';
    for (const auto& r : dist.support()) {
        out << r.probability.to_string();
        for (std::size_t i = 0; i < r.predictors.size(); ++i) out << '\t' << s.predictors[i].alphabet[r.predictors[i]];
        if (s.has_target()) out << '\t' << dist.target_label(r);
        out << '\n';
    }
}

std::string to_tsv(const JointDistribution& dist) {
    std::ostringstream os;
    write_tsv(os, dist);
    return os.str();
}

// ---------------------------------------------------------------------------
// Transformations

namespace {

/// Builds the projection onto the listed predictors and components, in the
/// given orders. Duplicate projected outcomes are merged without warnings.
JointDistribution project(const JointDistribution& dist, const std::vector<std::size_t>& predictors,
                          const std::vector<std::size_t>& components, const std::string& target_name) {
    const auto& s = dist.schema();
    VariableSchema out;
    for (auto p : predictors) out.predictors.push_back(s.predictors.at(p));
    for (auto c : components) out.target_components.push_back(s.target_components.at(c));
    out.target_name = target_name;

    std::map<std::vector<std::size_t>, std::size_t> slot;
    std::vector<OutcomeRow> rows;
    for (const auto& r : dist.support()) {
        std::vector<std::size_t> labels;
        for (auto p : predictors) labels.push_back(r.predictors[p]);
        for (auto c : components) labels.push_back(r.target[c]);
        auto [it, inserted] = slot.try_emplace(labels, rows.size());
        if (inserted) {
            rows.push_back({std::move(labels), r.probability});
        } else {
            rows[it->second].probability += r.probability;
        }
    }
    return JointDistribution::from_rows(std::move(out), rows);
}

std::string default_target_name(const VariableSchema& s, const std::vector<std::size_t>& components) {
    if (components.size() == 1) return s.target_components[components.front()].name;
    return s.target_name;
}

}  // namespace

JointDistribution marginal(const JointDistribution& dist, const std::vector<std::size_t>& variables) {
    if (variables.empty()) throw Error("marginal needs a nonempty variable selection");
    const auto& s = dist.schema();
    std::set<std::size_t> chosen;
    for (auto v : variables) {
        if (v >= s.variable_count()) throw Error(fmt::format("variable index {} out of range", v));
        chosen.insert(v);
    }
    std::vector<std::size_t> predictors;
    std::vector<std::size_t> components;
    for (auto v : chosen) {
        if (v < s.predictor_count()) {
            predictors.push_back(v);
        } else {
            components.push_back(v - s.predictor_count());
        }
    }
    const bool all_components = components.size() == s.component_count();
    return project(dist, predictors, components, all_components ? s.target_name : default_target_name(s, components));
}

JointDistribution condition(const JointDistribution& dist, const Event& evidence) {
    const auto& s = dist.schema();
    std::set<std::size_t> fixed;
    for (const auto& vv : evidence) {
        if (vv.variable >= s.variable_count()) throw Error("evidence refers to an unknown variable");
        if (vv.label >= s.variable(vv.variable).alphabet.size()) throw Error("evidence label out of range");
        if (!fixed.insert(vv.variable).second) throw Error("evidence assigns a variable twice");
    }
    const auto p_evidence = dist.probability(evidence);
    if (!p_evidence.is_positive()) throw Error("conditioning on a zero-probability event");
    if (fixed.size() == s.variable_count()) {
        // Conditioning on a full outcome leaves nothing to distribute; keep
        // the variables and return the point mass.
        std::vector<OutcomeRow> rows;
        std::vector<std::size_t> labels(s.variable_count());
        for (const auto& vv : evidence) labels[vv.variable] = vv.label;
        rows.push_back({labels, dist.is_exact() ? Probability::one() : Probability(1.0)});
        return JointDistribution::from_rows(s, rows);
    }

    VariableSchema out;
    std::vector<std::size_t> kept;
    for (std::size_t v = 0; v < s.variable_count(); ++v) {
        if (fixed.count(v)) continue;
        kept.push_back(v);
        if (v < s.predictor_count()) {
            out.predictors.push_back(s.predictors[v]);
        } else {
            out.target_components.push_back(s.target_components[v - s.predictor_count()]);
        }
    }
    out.target_name = out.component_count() == 1 && s.composite() ? out.target_components.front().name
                                                                   : s.target_name;

    std::map<std::vector<std::size_t>, std::size_t> slot;
    std::vector<OutcomeRow> rows;
    for (const auto& r : dist.support()) {
        bool match = std::all_of(evidence.begin(), evidence.end(),
                                 [&](const VariableValue& vv) { return r.label(vv.variable) == vv.label; });
        if (!match) continue;
        std::vector<std::size_t> labels;
        for (auto v : kept) labels.push_back(r.label(v));
        auto mass = r.probability / p_evidence;
        auto [it, inserted] = slot.try_emplace(labels, rows.size());
        if (inserted) {
            rows.push_back({std::move(labels), mass});
        } else {
            rows[it->second].probability += mass;
        }
    }
    return JointDistribution::from_rows(std::move(out), rows);
}

JointDistribution coarsen_target_to_two_events(const JointDistribution& dist, const std::vector<std::size_t>& target) {
    const auto& s = dist.schema();
    if (!s.has_target()) throw Error("distribution has no target");
    if (target.size() != s.component_count()) throw Error("target event must assign every component");
    Event t;
    std::string label;
    for (std::size_t c = 0; c < target.size(); ++c) {
        if (target[c] >= s.target_components[c].alphabet.size()) throw Error("target label out of range");
        t.push_back({s.component_variable(c), target[c]});
        if (c) label += ',';
        label += s.target_components[c].alphabet[target[c]];
    }
    if (!dist.probability(t).is_positive()) throw Error(fmt::format("target event '{}' has zero probability", label));

    VariableSchema out;
    out.predictors = s.predictors;
    out.target_name = s.target_name;
    out.target_components.push_back({s.target_name, {label, "~" + label}});

    std::map<std::vector<std::size_t>, std::size_t> slot;
    std::vector<OutcomeRow> rows;
    for (const auto& r : dist.support()) {
        std::vector<std::size_t> labels = r.predictors;
        labels.push_back(r.target == target ? 0 : 1);
        auto [it, inserted] = slot.try_emplace(labels, rows.size());
        if (inserted) {
            rows.push_back({std::move(labels), r.probability});
        } else {
            rows[it->second].probability += r.probability;
        }
    }
    return JointDistribution::from_rows(std::move(out), rows);
}

JointDistribution compose_targets(const JointDistribution& dist, const std::vector<std::size_t>& components) {
    const auto& s = dist.schema();
    if (components.empty()) throw Error("compose_targets needs at least one component");
    std::set<std::size_t> seen;
    for (auto c : components) {
        if (c >= s.component_count()) throw Error(fmt::format("unknown target component {}", c));
        if (!seen.insert(c).second) throw Error("target component listed twice");
    }
    std::vector<std::size_t> predictors(s.predictor_count());
    for (std::size_t i = 0; i < predictors.size(); ++i) predictors[i] = i;
    return project(dist, predictors, components, default_target_name(s, components));
}

JointDistribution compose_targets(const JointDistribution& dist, const std::vector<std::string>& component_names) {
    const auto& s = dist.schema();
    std::vector<std::size_t> components;
    for (const auto& name : component_names) {
        auto it = std::find_if(s.target_components.begin(), s.target_components.end(),
                               [&](const Variable& v) { return v.name == name; });
        if (it == s.target_components.end()) throw Error(fmt::format("unknown target component '{}'", name));
        components.push_back(static_cast<std::size_t>(it - s.target_components.begin()));
    }
    return compose_targets(dist, components);
}

}  // namespace ppid
