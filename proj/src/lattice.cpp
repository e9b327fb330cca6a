#include "ppid/lattice.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <numeric>

namespace ppid {

LatticeNode::LatticeNode(std::vector<SourceEvent> sources) : sources_(std::move(sources)) {
    if (sources_.empty()) throw Error("lattice node must contain at least one source event");
    std::sort(sources_.begin(), sources_.end());
    for (std::size_t i = 0; i < sources_.size(); ++i) {
        for (std::size_t j = 0; j < sources_.size(); ++j) {
            if (i != j && sources_[i].subset_of(sources_[j])) {
                throw Error(fmt::format("source events {{{}}} and {{{}}} do not form an antichain",
                                        sources_[i].to_string(), sources_[j].to_string()));
            }
        }
    }
}

LatticeNode LatticeNode::parse(const std::string& text) {
    std::vector<SourceEvent> sources;
    std::size_t i = 0;
    auto skip_space = [&] {
        while (i < text.size() && (text[i] == ' ' || text[i] == ',')) ++i;
    };
    skip_space();
    while (i < text.size()) {
        if (text[i] != '{') throw Error(fmt::format("malformed node '{}'", text));
        ++i;
        std::uint32_t mask = 0;
        while (i < text.size() && text[i] != '}') {
            const char c = text[i];
            if (c < '1' || c > '9') throw Error(fmt::format("malformed node '{}'", text));
            const auto bit = 1u << static_cast<unsigned>(c - '1');
            if (mask & bit) throw Error(fmt::format("repeated predictor in node '{}'", text));
            mask |= bit;
            ++i;
        }
        if (i == text.size()) throw Error(fmt::format("unterminated node '{}'", text));
        ++i;
        sources.emplace_back(mask);
        skip_space();
    }
    return LatticeNode(std::move(sources));
}

std::size_t LatticeNode::span() const {
    std::size_t span = 0;
    for (auto s : sources_) {
        auto idx = s.indices();
        span = std::max(span, idx.back() + 1);
    }
    return span;
}

std::string LatticeNode::to_string() const {
    std::string s;
    for (auto a : sources_) s += "{" + a.to_string() + "}";
    return s;
}

std::strong_ordering operator<=>(const LatticeNode& a, const LatticeNode& b) {
    return std::lexicographical_compare_three_way(a.sources_.begin(), a.sources_.end(), b.sources_.begin(),
                                                  b.sources_.end());
}

bool node_leq(const LatticeNode& alpha, const LatticeNode& beta) {
    return std::all_of(beta.sources().begin(), beta.sources().end(), [&](SourceEvent b) {
        return std::any_of(alpha.sources().begin(), alpha.sources().end(),
                           [&](SourceEvent a) { return a.subset_of(b); });
    });
}

LatticeNode meet(const LatticeNode& alpha, const LatticeNode& beta) {
    std::vector<SourceEvent> all = alpha.sources();
    all.insert(all.end(), beta.sources().begin(), beta.sources().end());
    std::vector<SourceEvent> minimal;
    for (auto a : all) {
        const bool dominated = std::any_of(all.begin(), all.end(), [&](SourceEvent b) { return b != a && b.subset_of(a); });
        if (!dominated && std::find(minimal.begin(), minimal.end(), a) == minimal.end()) minimal.push_back(a);
    }
    return LatticeNode(std::move(minimal));
}

namespace {

std::vector<SourceEvent> canonical_sources(std::size_t n) {
    std::vector<SourceEvent> out;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) out.emplace_back(mask);
    std::sort(out.begin(), out.end());
    return out;
}

void extend(const std::vector<SourceEvent>& subsets, std::size_t start, std::vector<SourceEvent>& current,
            std::vector<LatticeNode>& out) {
    for (std::size_t i = start; i < subsets.size(); ++i) {
        const auto candidate = subsets[i];
        const bool comparable = std::any_of(current.begin(), current.end(), [&](SourceEvent a) {
            return a.subset_of(candidate) || candidate.subset_of(a);
        });
        if (comparable) continue;
        current.push_back(candidate);
        out.emplace_back(current);
        extend(subsets, i + 1, current, out);
        current.pop_back();
    }
}

}  // namespace

std::vector<LatticeNode> enumerate_nodes(std::size_t n, std::size_t cap) {
    if (n == 0) throw Error("lattice needs at least one predictor");
    if (n > cap) throw Error(fmt::format("{} predictors exceeds the lattice cap of {}", n, cap));
    if (n > 9) throw Error("node notation supports at most 9 predictors");
    const auto subsets = canonical_sources(n);
    std::vector<LatticeNode> out;
    std::vector<SourceEvent> current;
    extend(subsets, 0, current, out);
    std::sort(out.begin(), out.end());
    return out;
}

RedundancyLattice::RedundancyLattice(std::size_t n, std::size_t cap) : n_(n), sources_() {
    auto nodes = enumerate_nodes(n, cap);
    sources_ = canonical_sources(n);
    const auto size = nodes.size();

    std::vector<bool> raw_leq(size * size);
    for (std::size_t a = 0; a < size; ++a) {
        for (std::size_t b = 0; b < size; ++b) raw_leq[a * size + b] = node_leq(nodes[a], nodes[b]);
    }

    // First pass: a linear extension by down-set size.
    std::vector<std::size_t> below(size, 0);
    for (std::size_t a = 0; a < size; ++a) {
        for (std::size_t b = 0; b < size; ++b) {
            if (a != b && raw_leq[b * size + a]) ++below[a];
        }
    }
    std::vector<std::size_t> order(size);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return below[x] < below[y]; });

    std::vector<std::size_t> rank(size, 0);
    for (auto a : order) {
        for (std::size_t b = 0; b < size; ++b) {
            if (a != b && raw_leq[b * size + a]) rank[a] = std::max(rank[a], rank[b] + 1);
        }
    }
    // Final order: by rank, ties in canonical order (nodes are already canonical-sorted).
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return rank[x] < rank[y]; });

    for (auto i : order) {
        nodes_.push_back(nodes[i]);
        rank_.push_back(rank[i]);
    }
    for (std::size_t i = 0; i < size; ++i) index_.emplace(nodes_[i], i);

    leq_.assign(size * size, false);
    for (std::size_t a = 0; a < size; ++a) {
        for (std::size_t b = 0; b < size; ++b) leq_[a * size + b] = raw_leq[order[a] * size + order[b]];
    }
    strict_down_.resize(size);
    lower_covers_.resize(size);
    for (std::size_t a = 0; a < size; ++a) {
        for (std::size_t b = 0; b < a; ++b) {
            if (leq(b, a)) strict_down_[a].push_back(b);
        }
        // Walking down the linear extension, b is a cover unless it sits
        // below a cover already found.
        for (auto it = strict_down_[a].rbegin(); it != strict_down_[a].rend(); ++it) {
            const auto b = *it;
            const bool covered = std::none_of(lower_covers_[a].begin(), lower_covers_[a].end(),
                                              [&](std::size_t c) { return leq(b, c); });
            if (covered) lower_covers_[a].push_back(b);
        }
        std::reverse(lower_covers_[a].begin(), lower_covers_[a].end());
    }
}

std::size_t RedundancyLattice::index_of(const LatticeNode& node) const {
    auto it = index_.find(node);
    if (it == index_.end()) {
        throw Error(fmt::format("node {} is not in the lattice for {} predictors", node.to_string(), n_));
    }
    return it->second;
}

std::size_t RedundancyLattice::meet(std::size_t a, std::size_t b) const {
    return index_of(ppid::meet(nodes_.at(a), nodes_.at(b)));
}

std::vector<LatticeNode> down_set(const RedundancyLattice& lattice, const LatticeNode& alpha) {
    const auto a = lattice.index_of(alpha);
    std::vector<LatticeNode> out;
    for (std::size_t b = 0; b < lattice.size(); ++b) {
        if (lattice.leq(b, a)) out.push_back(lattice.node(b));
    }
    return out;
}

NodeValues mobius_invert(const RedundancyLattice& lattice, const NodeValues& cumulative) {
    if (cumulative.size() != lattice.size()) {
        throw Error(fmt::format("cumulative map has {} values for {} nodes", cumulative.size(), lattice.size()));
    }
    NodeValues partial(lattice.size(), 0.0);
    for (std::size_t a = 0; a < lattice.size(); ++a) {
        double below = 0.0;
        for (auto b : lattice.strict_down_set(a)) below += partial[b];
        partial[a] = cumulative[a] - below;
    }
    return partial;
}

NodeValues cumulate(const RedundancyLattice& lattice, const NodeValues& partial) {
    if (partial.size() != lattice.size()) throw Error("partial map does not match the lattice");
    NodeValues cumulative(lattice.size(), 0.0);
    for (std::size_t a = 0; a < lattice.size(); ++a) {
        cumulative[a] = partial[a];
        for (auto b : lattice.strict_down_set(a)) cumulative[a] += partial[b];
    }
    return cumulative;
}

double min_over(const LatticeNode& alpha, const SourceValues& values) {
    double best = std::numeric_limits<double>::infinity();
    for (auto a : alpha.sources()) {
        auto it = values.find(a.mask());
        if (it == values.end()) throw Error(fmt::format("no value for source event {{{}}}", a.to_string()));
        best = std::min(best, it->second);
    }
    return best;
}

double closed_form_partial(const RedundancyLattice& lattice, const SourceValues& values, const LatticeNode& alpha) {
    const auto a = lattice.index_of(alpha);
    const double own = min_over(alpha, values);
    const auto& covers = lattice.lower_covers(a);
    if (covers.empty()) return own;
    double best = -std::numeric_limits<double>::infinity();
    for (auto b : covers) best = std::max(best, min_over(lattice.node(b), values));
    return own - best;
}

}  // namespace ppid
