#include "ppid/corpus.hpp"

#include <fmt/format.h>

#include <cmath>

namespace ppid::corpus {

namespace {

struct Row {
    Rational p;
    std::vector<std::string> labels;
};

JointDistribution make(std::vector<std::string> predictors, std::vector<std::string> components,
                       const std::vector<Row>& rows) {
    VariableSchema schema;
    for (auto& name : predictors) schema.predictors.push_back({std::move(name), {}});
    schema.target_name = components.size() == 1 ? components.front() : "t";
    for (auto& name : components) schema.target_components.push_back({std::move(name), {}});

    std::vector<OutcomeRow> out;
    for (const auto& row : rows) {
        OutcomeRow o;
        o.probability = Probability(row.p);
        for (std::size_t v = 0; v < row.labels.size(); ++v) {
            auto& var = v < schema.predictors.size() ? schema.predictors[v]
                                                     : schema.target_components[v - schema.predictors.size()];
            auto idx = var.find(row.labels[v]);
            if (!idx) {
                var.alphabet.push_back(row.labels[v]);
                idx = var.alphabet.size() - 1;
            }
            o.labels.push_back(*idx);
        }
        out.push_back(std::move(o));
    }
    return JointDistribution::from_rows(std::move(schema), out);
}

const Rational quarter{1, 4};

std::vector<Row> equiprobable(const std::vector<std::vector<std::string>>& outcomes) {
    std::vector<Row> rows;
    for (const auto& o : outcomes) rows.push_back({quarter, o});
    return rows;
}

// Reference-value builders.
Expected num(double v) { return {v, fmt::format("{}", v), 1e-9}; }
Expected frac(int n, int d) { return {static_cast<double>(n) / d, fmt::format("{}/{}", n, d), 1e-9}; }
Expected lg(int n, int d = 1) {
    return {std::log2(static_cast<double>(n) / d), d == 1 ? fmt::format("lg {}", n) : fmt::format("lg {}/{}", n, d),
            1e-9};
}
Expected printed(double v) { return {v, fmt::format("{}", v), 1e-3}; }
Expected closed(double v, std::string text) { return {v, std::move(text), 1e-9}; }

std::vector<Expected> nums(std::initializer_list<double> values) {
    std::vector<Expected> out;
    for (double v : values) out.push_back(num(v));
    return out;
}

std::vector<std::pair<std::string, Expected>> rucs(Expected r, Expected u1, Expected u2, Expected c) {
    return {{"R", std::move(r)}, {"U1", std::move(u1)}, {"U2", std::move(u2)}, {"C", std::move(c)}};
}

}  // namespace

const std::vector<std::string>& names() {
    static const std::vector<std::string> all{"xor", "pwunq", "rdnerr", "tbc", "tbep", "unq", "and"};
    return all;
}

Rational default_epsilon() { return quarter; }

JointDistribution build(const std::string& name, const Rational& epsilon) {
    if (name == "xor") {
        return make({"s1", "s2"}, {"t"},
                    equiprobable({{"0", "0", "0"}, {"0", "1", "1"}, {"1", "0", "1"}, {"1", "1", "0"}}));
    }
    if (name == "pwunq") {
        return make({"s1", "s2"}, {"t"},
                    equiprobable({{"0", "1", "1"}, {"1", "0", "1"}, {"0", "2", "2"}, {"2", "0", "2"}}));
    }
    if (name == "rdnerr") {
        if (epsilon <= 0 || epsilon > Rational(1, 2)) {
            throw Error(fmt::format("rdnerr needs 0 < epsilon <= 1/2, got {}", Probability(epsilon).to_string()));
        }
        const Rational hit = (1 - epsilon) / 2;
        const Rational miss = epsilon / 2;
        return make({"s1", "s2"}, {"t"},
                    {{hit, {"0", "0", "0"}}, {hit, {"1", "1", "1"}}, {miss, {"0", "1", "0"}}, {miss, {"1", "0", "1"}}});
    }
    if (name == "tbc") {
        return make({"s1", "s2"}, {"t1", "t2", "t3"},
                    equiprobable({{"0", "0", "0", "0", "0"},
                                  {"0", "1", "0", "1", "1"},
                                  {"1", "0", "1", "0", "1"},
                                  {"1", "1", "1", "1", "0"}}));
    }
    if (name == "tbep") {
        return make({"s1", "s2", "s3"}, {"t1", "t2", "t3"},
                    equiprobable({{"0", "0", "0", "0", "0", "0"},
                                  {"0", "1", "1", "0", "1", "1"},
                                  {"1", "0", "1", "1", "0", "1"},
                                  {"1", "1", "0", "1", "1", "0"}}));
    }
    if (name == "unq") {
        return make({"s1", "s2"}, {"t"},
                    equiprobable({{"0", "0", "0"}, {"0", "1", "0"}, {"1", "0", "1"}, {"1", "1", "1"}}));
    }
    if (name == "and") {
        return make({"s1", "s2"}, {"t"},
                    equiprobable({{"0", "0", "0"}, {"0", "1", "0"}, {"1", "0", "0"}, {"1", "1", "1"}}));
    }
    throw Error(fmt::format("unknown corpus entry '{}'", name));
}

const std::vector<std::string>& pointwise_columns() {
    static const std::vector<std::string> cols{"i1+", "i1-", "i2+", "i2-", "i12+", "i12-", "r+",
                                               "u1+", "u2+", "c+",  "r-",  "u1-", "u2-",  "c-"};
    return cols;
}

AtomFixture expected_atoms(const std::string& name, const Rational& epsilon) {
    AtomFixture f;
    f.name = name;

    if (name == "xor") {
        const auto row = nums({1, 1, 1, 1, 2, 1, 1, 0, 0, 1, 1, 0, 0, 0});
        f.rows = {{"1/4", {"0", "0", "0"}, row},
                  {"1/4", {"0", "1", "1"}, row},
                  {"1/4", {"1", "0", "1"}, row},
                  {"1/4", {"1", "1", "0"}, row}};
        f.expected_columns = row;
        f.averages = rucs(num(0), num(0), num(0), num(1));
        f.closed_form_averages = f.averages;
        return f;
    }
    if (name == "pwunq") {
        const auto one_zero = nums({1, 1, 2, 1, 2, 1, 1, 0, 1, 0, 1, 0, 0, 0});
        const auto zero_one = nums({2, 1, 1, 1, 2, 1, 1, 1, 0, 0, 1, 0, 0, 0});
        f.rows = {{"1/4", {"0", "1", "1"}, one_zero},
                  {"1/4", {"1", "0", "1"}, zero_one},
                  {"1/4", {"0", "2", "2"}, one_zero},
                  {"1/4", {"2", "0", "2"}, zero_one}};
        f.expected_columns = {frac(3, 2), num(1), frac(3, 2), num(1), num(2), num(1), num(1),
                              frac(1, 2), frac(1, 2), num(0), num(1), num(0), num(0), num(0)};
        f.averages = rucs(num(0), frac(1, 2), frac(1, 2), num(0));
        f.closed_form_averages = f.averages;
        return f;
    }
    if (name == "rdnerr") {
        if (epsilon != quarter) throw Error("rdnerr fixtures exist only for epsilon = 1/4");
        const std::vector<Expected> common{num(1),   num(0), num(1),    lg(4, 3), lg(8, 3), lg(4, 3), num(1),
                                           num(0),   num(0), lg(4, 3),  num(0),   num(0),   lg(4, 3), num(0)};
        const auto error = nums({1, 0, 1, 2, 3, 2, 1, 0, 0, 2, 0, 0, 2, 0});
        f.rows = {{"3/8", {"0", "0", "0"}, common},
                  {"3/8", {"1", "1", "1"}, common},
                  {"1/8", {"0", "1", "0"}, error},
                  {"1/8", {"1", "0", "1"}, error}};
        f.expected_columns = {num(1),     num(0), num(1), printed(0.811), printed(1.811), printed(0.811), num(1),
                              num(0),     num(0), printed(0.811), num(0), num(0), printed(0.811), num(0)};
        f.averages = rucs(num(1), num(0), printed(-0.811), printed(0.811));
        // Unique ambiguity of S2 averaged over the four realisations.
        const double u2_minus = 0.75 * std::log2(4.0 / 3.0) + 0.25 * 2.0;
        f.closed_form_averages = rucs(num(1), num(0), closed(-u2_minus, "-(3/4 lg 4/3 + 1/2)"),
                                      closed(u2_minus, "3/4 lg 4/3 + 1/2"));
        return f;
    }
    if (name == "tbc") {
        const auto row = nums({1, 0, 1, 0, 2, 0, 1, 0, 0, 1, 0, 0, 0, 0});
        f.rows = {{"1/4", {"0", "0", "0,0,0"}, row},
                  {"1/4", {"0", "1", "0,1,1"}, row},
                  {"1/4", {"1", "0", "1,0,1"}, row},
                  {"1/4", {"1", "1", "1,1,0"}, row}};
        f.expected_columns = row;
        f.averages = rucs(num(1), num(0), num(0), num(1));
        f.closed_form_averages = f.averages;
        return f;
    }
    if (name == "unq") {
        const auto row = nums({1, 0, 1, 1, 2, 1, 1, 0, 0, 1, 0, 0, 1, 0});
        f.rows = {{"1/4", {"0", "0", "0"}, row},
                  {"1/4", {"0", "1", "0"}, row},
                  {"1/4", {"1", "0", "1"}, row},
                  {"1/4", {"1", "1", "1"}, row}};
        f.expected_columns = row;
        f.averages = rucs(num(1), num(0), num(-1), num(1));
        f.closed_form_averages = f.averages;
        return f;
    }
    if (name == "and") {
        f.rows = {{"1/4", {"0", "0", "0"},
                   {num(1), lg(3, 2), num(1), lg(3, 2), num(2), lg(3), num(1), num(0), num(0), num(1), lg(3, 2),
                    num(0), num(0), num(1)}},
                  {"1/4", {"0", "1", "0"},
                   {num(1), lg(3, 2), num(1), lg(3), num(2), lg(3), num(1), num(0), num(0), num(1), lg(3, 2), num(0),
                    num(1), num(0)}},
                  {"1/4", {"1", "0", "0"},
                   {num(1), lg(3), num(1), lg(3, 2), num(2), lg(3), num(1), num(0), num(0), num(1), lg(3, 2), num(1),
                    num(0), num(0)}},
                  {"1/4", {"1", "1", "1"}, nums({1, 0, 1, 0, 2, 0, 1, 0, 0, 1, 0, 0, 0, 0})}};
        f.expected_columns = {num(1),  printed(0.689), num(1),  printed(0.689), num(2),
                              printed(1.189), num(1),  num(0),  num(0),  num(1),
                              printed(0.439), printed(0.250), printed(0.250), printed(0.25)};
        f.averages = rucs(printed(0.561), printed(-0.25), printed(-0.25), printed(0.75));
        const double r_minus = 0.75 * std::log2(1.5);
        f.closed_form_averages = rucs(closed(1.0 - r_minus, "1 - 3/4 lg 3/2"), frac(-1, 4), frac(-1, 4), frac(3, 4));
        return f;
    }
    if (name == "tbep") {
        const char* all[] = {"{1}{2}{3}",    "{1}{2}",    "{1}{3}",     "{2}{3}",     "{1}{23}",     "{2}{13}",
                             "{3}{12}",      "{1}",       "{2}",        "{3}",        "{12}{13}{23}", "{12}{13}",
                             "{12}{23}",     "{13}{23}",  "{12}",       "{13}",       "{23}",        "{123}"};
        for (const char* node : all) {
            const std::string s = node;
            const double plus = (s == "{1}{2}{3}" || s == "{12}{13}{23}") ? 1.0 : 0.0;
            f.nodes.push_back({s, {plus, fmt::format("{}", plus), 1e-12}, {0.0, "0", 1e-12}});
        }
        return f;
    }
    throw Error(fmt::format("no fixtures for corpus entry '{}'", name));
}

}  // namespace ppid::corpus
