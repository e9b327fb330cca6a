#pragma once

// Reference implementations used to check the library. Everything here is
// computed from first principles over plain tables and shares no code with
// src/ beyond the Rational type.

#include "ppid/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using ppid::Rational;

/// Rows of labels (predictors then target components) with exact masses.
struct Table {
    int n = 0;
    int m = 1;
    std::vector<std::vector<int>> rows;
    std::vector<Rational> p;
};

inline ppid::JointDistribution to_distribution(const Table& t) {
    ppid::VariableSchema schema;
    int max_label = 0;
    for (const auto& r : t.rows) max_label = std::max(max_label, *std::max_element(r.begin(), r.end()));
    std::vector<std::string> alphabet;
    for (int k = 0; k <= max_label; ++k) alphabet.push_back(std::to_string(k));
    for (int i = 0; i < t.n; ++i) schema.predictors.push_back({"s" + std::to_string(i + 1), alphabet});
    for (int c = 0; c < t.m; ++c) {
        schema.target_components.push_back({t.m == 1 ? "t" : "t" + std::to_string(c + 1), alphabet});
    }
    std::vector<ppid::OutcomeRow> rows;
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
        ppid::OutcomeRow row;
        for (int v : t.rows[k]) row.labels.push_back(static_cast<std::size_t>(v));
        row.probability = ppid::Probability(t.p[k]);
        rows.push_back(row);
    }
    return ppid::JointDistribution::from_rows(schema, rows);
}

/// Mass of the rows agreeing with `row` on every variable in `vars` (bit i set
/// means variable i, predictors first, then components).
inline Rational mass(const Table& t, const std::vector<int>& row, std::uint32_t vars) {
    Rational total = 0;
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
        bool match = true;
        for (int v = 0; v < t.n + t.m && match; ++v) {
            if ((vars >> v) & 1u) match = t.rows[k][v] == row[v];
        }
        if (match) total += t.p[k];
    }
    return total;
}

inline double lg(const Rational& q) { return std::log2(static_cast<double>(q)); }

/// h(s_a | t_given) at `row`: -log2 P(s_a, t_g) / P(t_g). `given` is a mask
/// over target components.
inline double h(const Table& t, const std::vector<int>& row, std::uint32_t sources, std::uint32_t given = 0) {
    const std::uint32_t g = given << t.n;
    const Rational joint = mass(t, row, sources | g);
    const Rational cond = mass(t, row, g);
    return -lg(joint / cond);
}

inline std::uint32_t all_components(const Table& t) { return (1u << t.m) - 1; }

// ---------------------------------------------------------------------------
// Lattice by filtering the double power set.

using Family = std::vector<std::uint32_t>;  // subset masks

inline bool is_antichain(const Family& f) {
    for (auto a : f) {
        for (auto b : f) {
            if (a != b && (a & b) == a) return false;
        }
    }
    return true;
}

inline std::vector<Family> brute_force_nodes(int n) {
    const std::uint32_t subsets = (1u << n) - 1;  // nonempty subsets are 1..subsets
    std::vector<Family> out;
    for (std::uint64_t choice = 1; choice < (std::uint64_t{1} << subsets); ++choice) {
        Family f;
        for (std::uint32_t s = 1; s <= subsets; ++s) {
            if ((choice >> (s - 1)) & 1u) f.push_back(s);
        }
        if (is_antichain(f)) out.push_back(f);
    }
    return out;
}

/// alpha <= beta iff every member of beta contains some member of alpha.
inline bool leq(const Family& alpha, const Family& beta) {
    return std::all_of(beta.begin(), beta.end(), [&](std::uint32_t b) {
        return std::any_of(alpha.begin(), alpha.end(), [&](std::uint32_t a) { return (a & b) == a; });
    });
}

inline std::string notation(Family f) {
    auto size = [](std::uint32_t m) { return __builtin_popcount(m); };
    auto digits = [](std::uint32_t m) {
        std::string s;
        for (int i = 0; i < 32; ++i) {
            if ((m >> i) & 1u) s += std::to_string(i + 1);
        }
        return s;
    };
    std::sort(f.begin(), f.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (size(a) != size(b)) return size(a) < size(b);
        return digits(a) < digits(b);
    });
    std::string out;
    for (auto m : f) out += "{" + digits(m) + "}";
    return out;
}

/// Moebius function of the brute-force lattice: mu[b][a] for b <= a.
inline std::vector<std::vector<double>> moebius_function(const std::vector<Family>& nodes) {
    const auto k = nodes.size();
    // Order nodes so that every predecessor comes first.
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
    std::vector<std::size_t> below(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) below[i] += leq(nodes[j], nodes[i]);
    }
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return below[a] < below[b]; });

    std::vector<std::vector<double>> mu(k, std::vector<double>(k, 0.0));
    for (std::size_t b = 0; b < k; ++b) {
        for (auto a : order) {
            if (!leq(nodes[b], nodes[a])) continue;
            if (a == b) {
                mu[b][a] = 1.0;
                continue;
            }
            double s = 0.0;
            for (auto c : order) {
                if (c != a && leq(nodes[b], nodes[c]) && leq(nodes[c], nodes[a])) s += mu[b][c];
            }
            mu[b][a] = -s;
        }
    }
    return mu;
}

/// Partial atoms pi(a) = sum_{b <= a} mu(b, a) f(b), for every node.
inline std::vector<double> partial_atoms(const std::vector<Family>& nodes, const std::vector<std::vector<double>>& mu,
                                         const std::vector<double>& f) {
    std::vector<double> pi(nodes.size(), 0.0);
    for (std::size_t a = 0; a < nodes.size(); ++a) {
        for (std::size_t b = 0; b < nodes.size(); ++b) {
            if (leq(nodes[b], nodes[a])) pi[a] += mu[b][a] * f[b];
        }
    }
    return pi;
}

/// min over members of h(member | given) at `row`.
inline double rmin(const Table& t, const std::vector<int>& row, const Family& alpha, std::uint32_t given) {
    double best = INFINITY;
    for (auto a : alpha) best = std::min(best, h(t, row, a, given));
    return best;
}

// ---------------------------------------------------------------------------
// Random rational distributions.

/// Random weights 0..6 on the full product of alphabets, normalised exactly.
/// Roughly a third of outcomes get zero mass.
inline Table random_table(std::mt19937_64& rng, int n, int m, int max_alphabet = 3) {
    std::uniform_int_distribution<int> size(2, max_alphabet);
    std::uniform_int_distribution<int> weight(0, 6);
    std::vector<int> alphabets;
    for (int v = 0; v < n + m; ++v) alphabets.push_back(size(rng));

    Table t;
    t.n = n;
    t.m = m;
    std::vector<int> row(n + m, 0);
    std::vector<int> weights;
    std::function<void(int)> walk = [&](int v) {
        if (v == n + m) {
            int w = weight(rng);
            if (w <= 2) w = 0;
            t.rows.push_back(row);
            weights.push_back(w);
            return;
        }
        for (int x = 0; x < alphabets[v]; ++x) {
            row[v] = x;
            walk(v + 1);
        }
    };
    walk(0);
    int total = 0;
    for (int w : weights) total += w;
    if (total == 0) {
        weights[0] = 1;
        total = 1;
    }
    Table out{n, m, {}, {}};
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
        if (weights[k] == 0) continue;
        out.rows.push_back(t.rows[k]);
        out.p.push_back(Rational(weights[k], total));
    }
    return out;
}

}  // namespace oracle
