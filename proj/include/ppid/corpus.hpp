#pragma once

#include "ppid/distribution.hpp"

#include <string>
#include <vector>

namespace ppid::corpus {

/// Names accepted by build(): xor, pwunq, rdnerr, tbc, tbep, unq, and.
const std::vector<std::string>& names();

/// Error probability used by the rdnerr fixtures.
Rational default_epsilon();

/// Builds a worked-example distribution. `epsilon` is only read for rdnerr
/// and must lie in (0, 1/2]; epsilon = 1/2 gives the same mass as unq.
///
/// Target layout:
///   xor, pwunq, rdnerr, unq, and: one target variable t
///   tbc:  components t1 = s1, t2 = s2, t3 = s1 XOR s2
///   tbep: components t1, t2, t3 copying s1, s2, s3
JointDistribution build(const std::string& name, const Rational& epsilon = default_epsilon());

/// A reference value with its provenance text ("lg 4/3", "0.811", ...)
/// and the comparison tolerance it deserves.
struct Expected {
    double value = 0.0;
    std::string text;
    double tolerance = 1e-9;
};

/// Column order of a bivariate pointwise row.
const std::vector<std::string>& pointwise_columns();

struct PointwiseRow {
    std::string p;
    std::vector<std::string> labels;  // s1, s2, then the target label as the distribution prints it
    std::vector<Expected> columns;    // aligned with pointwise_columns()
};

struct NodeExpectation {
    std::string node;
    Expected pi_plus;
    Expected pi_minus;
};

struct AtomFixture {
    std::string name;
    std::vector<PointwiseRow> rows;
    /// "Expected values" row, aligned with pointwise_columns().
    std::vector<Expected> expected_columns;
    /// Averaged recombined atoms as printed: R, U1, U2, C (bivariate).
    std::vector<std::pair<std::string, Expected>> averages;
    /// The same atoms as closed forms, compared at 1e-9.
    std::vector<std::pair<std::string, Expected>> closed_form_averages;
    /// Per-node partial specificity/ambiguity, identical in every realisation
    /// and on average (used for the trivariate example).
    std::vector<NodeExpectation> nodes;
};

/// Fixture tables for a corpus entry. Throws Error for unknown names or for
/// rdnerr with an epsilon other than 1/4.
AtomFixture expected_atoms(const std::string& name, const Rational& epsilon = default_epsilon());

}  // namespace ppid::corpus
