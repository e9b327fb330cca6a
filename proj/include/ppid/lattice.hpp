#pragma once

#include "ppid/distribution.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace ppid {

/// An antichain of source events: no member is a subset of another.
/// Members are kept sorted in canonical SourceEvent order.
class LatticeNode {
public:
    /// Sorts members; throws Error if empty, duplicated or not an antichain.
    explicit LatticeNode(std::vector<SourceEvent> sources);

    /// Parses the bracket notation, e.g. "{1}{2}" or "{12}{13}{23}".
    static LatticeNode parse(const std::string& text);

    const std::vector<SourceEvent>& sources() const { return sources_; }
    std::size_t size() const { return sources_.size(); }

    /// Highest predictor index mentioned, plus one.
    std::size_t span() const;

    std::string to_string() const;

    friend bool operator==(const LatticeNode&, const LatticeNode&) = default;
    friend std::strong_ordering operator<=>(const LatticeNode& a, const LatticeNode& b);

private:
    std::vector<SourceEvent> sources_;
};

/// alpha <= beta iff every member of beta contains some member of alpha.
bool node_leq(const LatticeNode& alpha, const LatticeNode& beta);

/// Greatest lower bound: the subset-minimal members of alpha united with beta.
LatticeNode meet(const LatticeNode& alpha, const LatticeNode& beta);

/// Every antichain of nonempty subsets of {1..n}, in canonical order.
/// Throws Error when n is 0 or exceeds `cap`.
std::vector<LatticeNode> enumerate_nodes(std::size_t n, std::size_t cap = 4);

/// The redundancy lattice over n predictors. Nodes are stored in a linear
/// extension of the order (by rank, then canonical order), so index 0 is
/// the bottom {1}{2}..{n} and the last index is the top {12..n}.
class RedundancyLattice {
public:
    static constexpr std::size_t default_cap = 4;

    explicit RedundancyLattice(std::size_t n, std::size_t cap = default_cap);

    std::size_t predictor_count() const { return n_; }
    std::size_t size() const { return nodes_.size(); }
    const std::vector<LatticeNode>& nodes() const { return nodes_; }
    const LatticeNode& node(std::size_t i) const { return nodes_.at(i); }
    std::size_t bottom() const { return 0; }
    std::size_t top() const { return nodes_.size() - 1; }

    /// Index of a node; throws Error for a node outside this lattice.
    std::size_t index_of(const LatticeNode& node) const;

    bool leq(std::size_t a, std::size_t b) const { return leq_[a * nodes_.size() + b]; }
    /// Nodes immediately below `i` (transitive reduction of the order).
    const std::vector<std::size_t>& lower_covers(std::size_t i) const { return lower_covers_.at(i); }
    /// Nodes strictly below `i`.
    const std::vector<std::size_t>& strict_down_set(std::size_t i) const { return strict_down_.at(i); }
    std::size_t rank(std::size_t i) const { return rank_.at(i); }

    /// Index of the meet of two lattice nodes.
    std::size_t meet(std::size_t a, std::size_t b) const;

    /// Every subset of {1..n} as a source event, canonical order.
    const std::vector<SourceEvent>& source_events() const { return sources_; }

private:
    std::size_t n_;
    std::vector<LatticeNode> nodes_;
    std::vector<bool> leq_;
    std::vector<std::vector<std::size_t>> lower_covers_;
    std::vector<std::vector<std::size_t>> strict_down_;
    std::vector<std::size_t> rank_;
    std::map<LatticeNode, std::size_t> index_;
    std::vector<SourceEvent> sources_;
};

/// { beta : beta <= alpha }, in lattice order.
std::vector<LatticeNode> down_set(const RedundancyLattice& lattice, const LatticeNode& alpha);

/// Cumulative values indexed like `lattice.nodes()`.
using NodeValues = std::vector<double>;

/// Partial contributions pi with pi(alpha) = f(alpha) - sum_{beta < alpha} pi(beta).
NodeValues mobius_invert(const RedundancyLattice& lattice, const NodeValues& cumulative);

/// sum_{beta <= alpha} pi(beta) for every alpha; inverse of mobius_invert.
NodeValues cumulate(const RedundancyLattice& lattice, const NodeValues& partial);

/// Values of a functional on single source events, keyed by subset mask.
using SourceValues = std::map<std::uint32_t, double>;

/// min over the members of `alpha` of `values`.
double min_over(const LatticeNode& alpha, const SourceValues& values);

/// Closed form of the partial atom for min-type redundancy:
/// min_{a in alpha} v(a) - max_{beta covered by alpha} min_{b in beta} v(b).
/// The bottom node returns its min.
double closed_form_partial(const RedundancyLattice& lattice, const SourceValues& values, const LatticeNode& alpha);

}  // namespace ppid
