#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ppid/lattice.hpp"
#include "support/oracle.hpp"

#include <set>

using namespace ppid;
using doctest::Approx;

namespace {

LatticeNode node(const char* text) { return LatticeNode::parse(text); }

LatticeNode from_family(const oracle::Family& f) {
    std::vector<SourceEvent> s;
    for (auto m : f) s.emplace_back(m);
    return LatticeNode(s);
}

std::vector<std::string> names(const std::vector<LatticeNode>& nodes) {
    std::vector<std::string> out;
    for (const auto& n : nodes) out.push_back(n.to_string());
    return out;
}

}  // namespace

TEST_CASE("node notation round trips and enforces the antichain condition") {
    CHECK(node("{1}{2}").to_string() == "{1}{2}");
    CHECK(node("{2}{1}").to_string() == "{1}{2}");
    CHECK(node("{23}{13}{12}").to_string() == "{12}{13}{23}");
    CHECK(node("{12}").span() == 2);
    CHECK_THROWS_AS(node("{1}{12}"), Error);
    CHECK_THROWS_AS(node("{1}{1}"), Error);
    CHECK_THROWS_AS(node(""), Error);
    CHECK_THROWS_AS(node("{1"), Error);
    CHECK_THROWS_AS(node("{a}"), Error);
    CHECK_THROWS_AS(node("{11}"), Error);
    CHECK_THROWS_AS(LatticeNode({}), Error);
}

TEST_CASE("small lattices list the nodes of the figures") {
    CHECK(names(enumerate_nodes(1)) == std::vector<std::string>{"{1}"});
    const auto two = names(RedundancyLattice(2).nodes());
    CHECK(two == std::vector<std::string>{"{1}{2}", "{1}", "{2}", "{12}"});

    const std::set<std::string> three_expected{
        "{1}{2}{3}", "{1}{2}",       "{1}{3}",   "{2}{3}",   "{1}{23}",  "{2}{13}", "{3}{12}",
        "{1}",       "{2}",          "{3}",      "{12}{13}{23}", "{12}{13}", "{12}{23}", "{13}{23}",
        "{12}",      "{13}",         "{23}",     "{123}"};
    const auto three = names(enumerate_nodes(3));
    CHECK(std::set<std::string>(three.begin(), three.end()) == three_expected);
    CHECK(three.size() == 18);
}

TEST_CASE("node counts agree with the double power set filter") {
    const std::size_t expected[] = {1, 4, 18, 166};
    for (int n = 1; n <= 4; ++n) {
        const auto brute = oracle::brute_force_nodes(n);
        CHECK(brute.size() == expected[n - 1]);
        const auto nodes = enumerate_nodes(static_cast<std::size_t>(n));
        CHECK(nodes.size() == brute.size());

        std::set<std::string> a, b;
        for (const auto& f : brute) b.insert(oracle::notation(f));
        for (const auto& x : nodes) a.insert(x.to_string());
        CHECK(a == b);
        CHECK(a.size() == nodes.size());  // each exactly once
    }
}

TEST_CASE("lattice cap") {
    CHECK_THROWS_AS(RedundancyLattice(0), Error);
    CHECK_THROWS_AS(RedundancyLattice(5), Error);
    CHECK_THROWS_AS(enumerate_nodes(5), Error);
    CHECK(RedundancyLattice(3, 3).size() == 18);
    CHECK_THROWS_AS(RedundancyLattice(4, 3), Error);
}

TEST_CASE("order examples") {
    CHECK(node_leq(node("{1}{2}"), node("{12}")));
    CHECK_FALSE(node_leq(node("{1}"), node("{2}")));
    CHECK_FALSE(node_leq(node("{2}"), node("{1}")));
    CHECK(node_leq(node("{1}"), node("{1}")));
    CHECK(node_leq(node("{1}{23}"), node("{12}{13}")));
    CHECK_FALSE(node_leq(node("{123}"), node("{1}")));
}

TEST_CASE("meet examples") {
    CHECK(meet(node("{1}"), node("{2}")) == node("{1}{2}"));
    CHECK(meet(node("{12}"), node("{1}")) == node("{1}"));
    CHECK(meet(node("{12}{13}"), node("{12}{13}")) == node("{12}{13}"));
    CHECK(meet(node("{12}"), node("{3}")) == node("{3}{12}"));
}

TEST_CASE("order and meet match the definitions exhaustively for n <= 3") {
    for (int n = 1; n <= 3; ++n) {
        const RedundancyLattice lattice(static_cast<std::size_t>(n));
        const auto brute = oracle::brute_force_nodes(n);
        const auto k = lattice.size();

        for (const auto& fa : brute) {
            for (const auto& fb : brute) {
                const auto a = lattice.index_of(from_family(fa));
                const auto b = lattice.index_of(from_family(fb));
                CHECK(lattice.leq(a, b) == oracle::leq(fa, fb));
                CHECK(node_leq(lattice.node(a), lattice.node(b)) == oracle::leq(fa, fb));
            }
        }
        for (std::size_t a = 0; a < k; ++a) {
            CHECK(lattice.leq(a, a));
            for (std::size_t b = 0; b < k; ++b) {
                if (a != b) CHECK_FALSE((lattice.leq(a, b) && lattice.leq(b, a)));
                for (std::size_t c = 0; c < k; ++c) {
                    if (lattice.leq(a, b) && lattice.leq(b, c)) CHECK(lattice.leq(a, c));
                }
                // Greatest lower bound.
                const auto m = lattice.meet(a, b);
                CHECK(lattice.leq(m, a));
                CHECK(lattice.leq(m, b));
                CHECK(meet(lattice.node(a), lattice.node(b)) == lattice.node(m));
                for (std::size_t c = 0; c < k; ++c) {
                    if (lattice.leq(c, a) && lattice.leq(c, b)) CHECK(lattice.leq(c, m));
                }
            }
        }
        CHECK(lattice.node(lattice.bottom()) == node(n == 1 ? "{1}" : n == 2 ? "{1}{2}" : "{1}{2}{3}"));
        CHECK(lattice.node(lattice.top()).sources().front() == SourceEvent::full(static_cast<std::size_t>(n)));
    }
}

TEST_CASE("covers are the transitive reduction and storage is a linear extension") {
    for (std::size_t n = 1; n <= 4; ++n) {
        const RedundancyLattice lattice(n);
        const auto k = lattice.size();
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = 0; b < k; ++b) {
                if (lattice.leq(a, b) && a != b) CHECK(a < b);
                const bool strictly_below = a != b && lattice.leq(a, b);
                bool direct = strictly_below;
                for (std::size_t c = 0; c < k && direct; ++c) {
                    if (c != a && c != b && lattice.leq(a, c) && lattice.leq(c, b)) direct = false;
                }
                const auto& covers = lattice.lower_covers(b);
                CHECK((std::find(covers.begin(), covers.end(), a) != covers.end()) == direct);
                const auto& down = lattice.strict_down_set(b);
                CHECK((std::find(down.begin(), down.end(), a) != down.end()) == strictly_below);
            }
        }
    }
    CHECK(RedundancyLattice(3).lower_covers(17).size() == 3);
}

TEST_CASE("down sets") {
    const RedundancyLattice two(2);
    CHECK(down_set(two, node("{1}{2}")).size() == 1);
    CHECK(names(down_set(two, node("{1}"))) == std::vector<std::string>{"{1}{2}", "{1}"});
    CHECK(down_set(RedundancyLattice(3), node("{123}")).size() == 18);
    CHECK_THROWS_AS(down_set(two, node("{3}")), Error);
    CHECK_THROWS_AS(two.index_of(node("{1}{2}{3}")), Error);
}

TEST_CASE("moebius inversion") {
    const RedundancyLattice two(2);
    const NodeValues constant(4, 2.5);
    CHECK(mobius_invert(two, constant) == NodeValues{2.5, 0, 0, 0});
    // Xor specificity: 1, 1, 1, 2.
    CHECK(mobius_invert(two, {1, 1, 1, 2}) == NodeValues{1, 0, 0, 1});
    CHECK_THROWS_AS(mobius_invert(two, {1, 2}), Error);
}

TEST_CASE("moebius inversion matches the moebius function and round trips") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int n = 1; n <= 3; ++n) {
        const RedundancyLattice lattice(static_cast<std::size_t>(n));
        const auto brute = oracle::brute_force_nodes(n);
        const auto mu = oracle::moebius_function(brute);
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<double> f_brute(brute.size());
            NodeValues f(lattice.size());
            for (std::size_t i = 0; i < brute.size(); ++i) {
                f_brute[i] = u(rng);
                f[lattice.index_of(from_family(brute[i]))] = f_brute[i];
            }
            const auto pi = mobius_invert(lattice, f);
            const auto pi_brute = oracle::partial_atoms(brute, mu, f_brute);
            for (std::size_t i = 0; i < brute.size(); ++i) {
                CHECK(pi[lattice.index_of(from_family(brute[i]))] == Approx(pi_brute[i]).epsilon(1e-9));
            }
            const auto back = cumulate(lattice, pi);
            for (std::size_t i = 0; i < f.size(); ++i) CHECK(back[i] == Approx(f[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("closed form equals moebius inversion for min-type functionals") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    for (std::size_t n = 1; n <= 4; ++n) {
        const RedundancyLattice lattice(n);
        for (int trial = 0; trial < (n == 4 ? 5 : 40); ++trial) {
            SourceValues v;
            // Monotone source values, like entropies of nested events.
            for (auto a : lattice.source_events()) v[a.mask()] = 0.0;
            for (auto a : lattice.source_events()) {
                double base = u(rng);
                for (auto b : lattice.source_events()) {
                    if (b.subset_of(a) && b != a) base = std::max(base, v[b.mask()] + u(rng) * 0.1);
                }
                v[a.mask()] = base;
            }
            NodeValues f(lattice.size());
            for (std::size_t k = 0; k < lattice.size(); ++k) f[k] = min_over(lattice.node(k), v);
            const auto pi = mobius_invert(lattice, f);
            for (std::size_t k = 0; k < lattice.size(); ++k) {
                CHECK(closed_form_partial(lattice, v, lattice.node(k)) == Approx(pi[k]).epsilon(1e-9));
                CHECK(pi[k] >= -1e-9);
            }
        }
    }
    // Xor realisation: pi({12}) = 2 - max(1, 1).
    const RedundancyLattice two(2);
    const SourceValues xor_values{{1u, 1.0}, {2u, 1.0}, {3u, 2.0}};
    CHECK(closed_form_partial(two, xor_values, node("{12}")) == 1.0);
    CHECK(closed_form_partial(two, xor_values, node("{1}{2}")) == 1.0);
    CHECK_THROWS_AS(closed_form_partial(two, {{1u, 1.0}}, node("{12}")), Error);
}
