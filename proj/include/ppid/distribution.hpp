#pragma once

#include "ppid/error.hpp"
#include "ppid/probability.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ppid {

/// A named discrete variable with an ordered, finite alphabet of opaque labels.
struct Variable {
    std::string name;
    std::vector<std::string> alphabet;

    std::optional<std::size_t> find(std::string_view label) const;
    std::size_t index_of(std::string_view label) const;  // throws Error if absent
};

/// Predictors S1..Sn plus a target T that may be composite T = (T1, ..., Tm).
///
/// Variables are addressed in one index space: predictors occupy
/// [0, n) and target components occupy [n, n + m). A plain target is a
/// composite of one component. m == 0 is allowed for marginals that drop
/// the target entirely.
struct VariableSchema {
    std::vector<Variable> predictors;
    std::string target_name = "t";
    std::vector<Variable> target_components;

    std::size_t predictor_count() const { return predictors.size(); }
    std::size_t component_count() const { return target_components.size(); }
    std::size_t variable_count() const { return predictors.size() + target_components.size(); }
    bool has_target() const { return !target_components.empty(); }
    bool composite() const { return target_components.size() > 1; }

    const Variable& variable(std::size_t index) const;
    std::size_t component_variable(std::size_t component) const { return predictors.size() + component; }
    std::optional<std::size_t> find_variable(std::string_view name) const;

    /// Cartesian product of the component alphabets, labels comma-joined.
    std::vector<std::string> target_alphabet() const;

    /// Throws Error when an alphabet is empty or a name is duplicated.
    void validate() const;
};

/// One support point (s1, ..., sn, t) with its probability mass. Labels are
/// stored as indices into the schema alphabets.
struct Realisation {
    std::vector<std::size_t> predictors;
    std::vector<std::size_t> target;
    Probability probability;

    std::size_t label(std::size_t variable) const {
        return variable < predictors.size() ? predictors[variable] : target[variable - predictors.size()];
    }
};

/// A nonempty subset of predictor positions. Interpreted within a fixed
/// realisation as the joint event over exactly those predictors.
///
/// Ordering is canonical: by size, then lexicographically by index list.
class SourceEvent {
public:
    static constexpr std::size_t max_predictors = 16;

    explicit SourceEvent(std::uint32_t mask);
    static SourceEvent of(std::initializer_list<std::size_t> zero_based_indices);
    static SourceEvent full(std::size_t n);

    std::uint32_t mask() const { return mask_; }
    std::size_t size() const;
    bool contains(std::size_t index) const { return (mask_ >> index) & 1u; }
    bool subset_of(SourceEvent other) const { return (mask_ & ~other.mask_) == 0; }
    std::vector<std::size_t> indices() const;
    SourceEvent unite(SourceEvent other) const { return SourceEvent(mask_ | other.mask_); }

    /// One-based digits, e.g. "12" for predictors {S1, S2}.
    std::string to_string() const;

    friend bool operator==(SourceEvent a, SourceEvent b) { return a.mask_ == b.mask_; }
    friend std::strong_ordering operator<=>(SourceEvent a, SourceEvent b);

private:
    std::uint32_t mask_;
};

/// An assignment of labels to a subset of variables (unified index space).
struct VariableValue {
    std::size_t variable;
    std::size_t label;
    friend bool operator==(const VariableValue&, const VariableValue&) = default;
};
using Event = std::vector<VariableValue>;

/// A raw row before validation: labels for every variable, then the mass.
struct OutcomeRow {
    std::vector<std::size_t> labels;
    Probability probability;
};

/// Immutable joint probability mass over predictors and target.
///
/// Only strictly positive masses are stored. Support order is first
/// appearance in the input rows.
class JointDistribution {
public:
    static constexpr double decimal_tolerance = 1e-9;

    /// Validates rows against the schema. Duplicate outcomes are summed and a
    /// warning recorded; zero rows are dropped and counted.
    static JointDistribution from_rows(VariableSchema schema, const std::vector<OutcomeRow>& rows);

    const VariableSchema& schema() const { return schema_; }
    const std::vector<Realisation>& support() const { return support_; }
    std::size_t predictor_count() const { return schema_.predictor_count(); }
    std::size_t component_count() const { return schema_.component_count(); }
    bool is_exact() const { return exact_; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    std::size_t dropped_zero_rows() const { return dropped_zero_rows_; }

    Probability probability(const Event& event) const;
    Probability total_mass() const;

    /// The joint event of `source` within realisation `r`.
    Event source_event(const Realisation& r, SourceEvent source) const;
    /// The events of the listed target components within `r`.
    Event target_event(const Realisation& r, const std::vector<std::size_t>& components) const;
    /// The full (possibly composite) target event of `r`.
    Event target_event(const Realisation& r) const;

    std::string target_label(const Realisation& r) const;
    std::string label(std::size_t variable, std::size_t label_index) const;

    /// Index of the support point with exactly these labels, if present.
    std::optional<std::size_t> find(const std::vector<std::size_t>& predictors,
                                     const std::vector<std::size_t>& target) const;

private:
    JointDistribution() = default;
    void scale_masses();

    VariableSchema schema_;
    std::vector<Realisation> support_;
    bool exact_ = true;
    std::vector<std::string> warnings_;
    std::size_t dropped_zero_rows_ = 0;
    // Exact masses as integers over a common denominator, when that fits in
    // 62 bits; empty otherwise. Keeps event sums off the rational path.
    std::vector<std::int64_t> scaled_;
    std::int64_t denominator_ = 0;
};

Event concat(Event a, const Event& b);

enum class InputFormat { tsv, json };

JointDistribution load_distribution(std::istream& in, InputFormat format);
JointDistribution load_distribution_file(const std::string& path);

/// TSV with a `#p<TAB>names...` header; composite targets comma-joined.
void write_tsv(std::ostream& out, const JointDistribution& dist);
std::string to_tsv(const JointDistribution& dist);

/// Keeps the selected variables (unified indices, any order) and sums out
/// the rest. Selected predictors and components keep their relative order.
JointDistribution marginal(const JointDistribution& dist, const std::vector<std::size_t>& variables);

/// P(remaining | evidence). Evidence variables are removed from the result.
JointDistribution condition(const JointDistribution& dist, const Event& evidence);

/// Replaces the target by the two-event partition {t, ~t} where `target`
/// holds one label index per component.
JointDistribution coarsen_target_to_two_events(const JointDistribution& dist,
                                               const std::vector<std::size_t>& target);

/// Makes the target the tuple of the listed components (in that order);
/// unlisted components are summed out.
JointDistribution compose_targets(const JointDistribution& dist, const std::vector<std::size_t>& components);
JointDistribution compose_targets(const JointDistribution& dist, const std::vector<std::string>& component_names);

}  // namespace ppid
