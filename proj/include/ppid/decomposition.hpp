#pragma once

#include "ppid/distribution.hpp"
#include "ppid/lattice.hpp"
#include "ppid/measures.hpp"

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ppid {

// ---------------------------------------------------------------------------
// Pointwise redundancy on a single node

/// r+min(alpha -> t) = min_{a in alpha} h(a).
InfoValue rmin_plus(const JointDistribution& dist, const LatticeNode& alpha, const Realisation& r, double base = 2.0);

/// r-min(alpha -> t) = min_{a in alpha} h(a | t), t the full target of r.
InfoValue rmin_minus(const JointDistribution& dist, const LatticeNode& alpha, const Realisation& r,
                     double base = 2.0);

/// r+min(alpha -> t1 | t2) = min_{a in alpha} h(a | t2), `given` lists the
/// conditioning target components.
InfoValue rmin_plus_conditional(const JointDistribution& dist, const LatticeNode& alpha, const Realisation& r,
                                const std::vector<std::size_t>& given, double base = 2.0);

/// r-min(alpha -> t1 | t2) = min_{a in alpha} h(a | t1, t2), with t1 the
/// `targets` components and t2 the `given` components.
InfoValue rmin_minus_conditional(const JointDistribution& dist, const LatticeNode& alpha, const Realisation& r,
                                 const std::vector<std::size_t>& targets, const std::vector<std::size_t>& given,
                                 double base = 2.0);

/// r+min - r-min. May be negative.
InfoValue rmin_recombined(const JointDistribution& dist, const LatticeNode& alpha, const Realisation& r,
                          double base = 2.0);

/// Conditional redundant information r(alpha -> targets | given).
InfoValue rmin_recombined_conditional(const JointDistribution& dist, const LatticeNode& alpha, const Realisation& r,
                                      const std::vector<std::size_t>& targets, const std::vector<std::size_t>& given,
                                      double base = 2.0);

// ---------------------------------------------------------------------------
// Full decomposition

struct DecompositionOptions {
    double base = 2.0;
    std::size_t lattice_cap = RedundancyLattice::default_cap;
    /// Target components decomposed jointly; empty means all of them.
    std::vector<std::size_t> target_components;
    /// Target components conditioned on, for conditional decompositions.
    std::vector<std::size_t> given_components;
    /// Magnitude below which partial atoms snap to zero for exact inputs.
    double zero_snap = 1e-12;
    /// Worker threads for per-realisation evaluation. Output is identical
    /// for any value.
    std::size_t jobs = 1;
};

/// Redundancy and partial atoms at one node. For a single realisation these
/// are r+, r-, pi+, pi-, pi; in the averaged table the same fields hold
/// R+, R-, Pi+, Pi-, Pi.
struct NodeAtoms {
    double r_plus = 0.0;
    double r_minus = 0.0;
    double pi_plus = 0.0;
    double pi_minus = 0.0;
    double pi = 0.0;

    double r() const { return r_plus - r_minus; }
};

struct RealisationAtoms {
    Realisation realisation;
    std::vector<NodeAtoms> nodes;
};

/// Per-realisation and averaged atoms over the redundancy lattice.
///
/// The distribution held here is the projection of the input onto the
/// predictors, the decomposed target components (first) and the conditioning
/// components (after them).
struct AtomTable {
    std::shared_ptr<const RedundancyLattice> lattice;
    JointDistribution distribution;
    std::size_t target_count = 0;
    std::size_t given_count = 0;
    std::vector<RealisationAtoms> realisations;
    std::vector<NodeAtoms> averages;
    double base = 2.0;
    bool exact = true;

    const NodeAtoms& average(const LatticeNode& node) const { return averages.at(lattice->index_of(node)); }
    const NodeAtoms& atoms(std::size_t realisation, const LatticeNode& node) const {
        return realisations.at(realisation).nodes.at(lattice->index_of(node));
    }
    /// R, U1, U2, C for two predictors; bracket notation otherwise.
    std::string node_label(std::size_t node) const;
};

AtomTable decompose(const JointDistribution& dist, const DecompositionOptions& options = {});

/// Bivariate shorthand for the averaged recombined atoms.
struct BivariateAtoms {
    double redundant = 0.0;
    double unique_first = 0.0;
    double unique_second = 0.0;
    double complementary = 0.0;
};
BivariateAtoms bivariate_averages(const AtomTable& table);

// ---------------------------------------------------------------------------
// Target chain rule and two-event invariance

struct ChainRuleRow {
    std::size_t realisation = 0;  // index into the report's distribution support
    std::size_t node = 0;
    double joint = 0.0;                // r(alpha -> t1,t2)
    double first = 0.0;                // r(alpha -> t1)
    double second_given_first = 0.0;   // r(alpha -> t2 | t1)
    double second = 0.0;               // r(alpha -> t2)
    double first_given_second = 0.0;   // r(alpha -> t1 | t2)
    double residual_first_order = 0.0;
    double residual_second_order = 0.0;
};

struct ChainRuleReport {
    JointDistribution distribution;  // predictors plus (t1, t2)
    std::shared_ptr<const RedundancyLattice> lattice;
    std::vector<ChainRuleRow> rows;
    double max_residual = 0.0;
    /// Largest node-wise mismatch of the averaged recombined atoms:
    /// Pi(-> t1,t2) against Pi(-> t1) + Pi(-> t2 | t1) and the other order.
    double max_atom_residual = 0.0;
};

struct ChainRuleOptions {
    std::size_t first = 0;
    std::size_t second = 1;
    double base = 2.0;
    std::size_t lattice_cap = RedundancyLattice::default_cap;
};

/// Checks r(a -> t1,t2) = r(a -> t1) + r(a -> t2|t1) = r(a -> t2) + r(a -> t1|t2)
/// on every support realisation, at `alpha` or at every node when empty.
ChainRuleReport verify_target_chain_rule(const JointDistribution& dist, const std::optional<LatticeNode>& alpha,
                                         const ChainRuleOptions& options = {});

struct InvarianceReport {
    double r_plus = 0.0;
    double r_minus = 0.0;
    double r_plus_coarse = 0.0;
    double r_minus_coarse = 0.0;
    double max_difference = 0.0;
};

/// Recomputes r+min and r-min after coarsening the target to {t, ~t} at the
/// realised target of support point `realisation`.
InvarianceReport two_event_invariance_check(const JointDistribution& dist, const LatticeNode& alpha,
                                            std::size_t realisation, double base = 2.0);

// ---------------------------------------------------------------------------
// Serialization

enum class AtomSelection { pointwise, average, both };

/// Pointwise columns: p, predictor labels, target, node, r_plus, r_minus,
/// pi_plus, pi_minus, pi. The summary block is one header row of atom labels
/// and one row of averaged recombined atoms.
void write_atoms_csv(std::ostream& out, const AtomTable& table, AtomSelection selection);
void write_atoms_json(std::ostream& out, const AtomTable& table, AtomSelection selection);
void write_atoms_pretty(std::ostream& out, const AtomTable& table, AtomSelection selection);

/// Fixed-precision number formatting shared by all writers.
std::string format_number(double x);

}  // namespace ppid
