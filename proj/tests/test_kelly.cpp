#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ppid/corpus.hpp"
#include "ppid/kelly.hpp"
#include "support/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

using namespace ppid;
using namespace ppid::kelly;
using doctest::Approx;

namespace {

constexpr double tol = 1e-9;

const auto s1 = SourceEvent::of({0});
const auto s2 = SourceEvent::of({1});
const auto s12 = SourceEvent::of({0, 1});

JointDistribution race(const std::string& tsv) {
    std::istringstream in(tsv);
    return load_distribution(in, InputFormat::tsv);
}

}  // namespace

TEST_CASE("fair odds give a zero doubling rate") {
    const auto uniform = race("1/4\t0\ta\n1/4\t0\tb\n1/4\t1\tc\n1/4\t1\td\n");
    const auto m = RaceMarket::fair(uniform);
    CHECK(m.horses().size() == 4);
    CHECK(m.odds(0) == 4.0);
    CHECK(optimal_doubling_rate(m).value == 0.0);

    const auto skew = race("3/4\t0\ta\n1/4\t1\tb\n");
    CHECK(optimal_doubling_rate(RaceMarket::fair(skew)).value == 0.0);
}

TEST_CASE("doubled fair odds earn one bit per race") {
    const auto skew = race("3/4\t0\ta\n1/4\t1\tb\n");
    const auto m = RaceMarket::with_odds(skew, {Probability(Rational(8, 3)), Probability(Rational(8))});
    CHECK(optimal_doubling_rate(m).value == Approx(1.0).epsilon(tol));
}

TEST_CASE("odds validation") {
    const auto skew = race("3/4\t0\ta\n1/4\t1\tb\n");
    // Sum of 1/o above one is a track take.
    CHECK_THROWS_AS(RaceMarket::with_odds(skew, {Probability(Rational(1)), Probability(Rational(4))}), Error);
    CHECK_THROWS_AS(RaceMarket::with_odds(skew, {Probability(Rational(0)), Probability(Rational(4))}), Error);
    CHECK_THROWS_AS(RaceMarket::with_odds(skew, {Probability(Rational(4))}), Error);
    CHECK_THROWS_AS(RaceMarket::fair(skew, SourceEvent::of({3})), Error);
    CHECK_THROWS_AS(value_of_side_information(RaceMarket::fair(skew)), Error);
}

TEST_CASE("side information is worth the mutual information") {
    const auto tbc = corpus::build("tbc");
    const auto one = value_of_side_information(RaceMarket::fair(tbc, s1));
    CHECK(one.gain.value == Approx(1.0).epsilon(tol));
    CHECK(one.mutual_information.value == Approx(1.0).epsilon(tol));
    const auto both = value_of_side_information(RaceMarket::fair(tbc, s12));
    CHECK(both.gain.value == Approx(2.0).epsilon(tol));

    // Xor: either predictor alone is independent of the target.
    const auto x = corpus::build("xor");
    CHECK(std::abs(value_of_side_information(RaceMarket::fair(x, s1)).gain.value) < tol);

    for (const auto& name : corpus::names()) {
        const auto d = corpus::build(name);
        for (std::uint32_t mask = 1; mask < (1u << d.predictor_count()); ++mask) {
            const auto v = value_of_side_information(RaceMarket::fair(d, SourceEvent(mask)));
            CHECK(v.gain.value == Approx(v.mutual_information.value).epsilon(tol));
        }
    }
}

TEST_CASE("side information is odds-independent") {
    const auto d = corpus::build("and");
    const auto fair = RaceMarket::fair(d, s12);
    const auto rigged = RaceMarket::with_odds(d, {Probability(Rational(2)), Probability(Rational(2))}, s12);
    CHECK(value_of_side_information(rigged).gain.value ==
          Approx(value_of_side_information(fair).gain.value).epsilon(tol));
}

TEST_CASE("pointwise returns") {
    const auto tbc = corpus::build("tbc");
    const auto m = RaceMarket::fair(tbc, s1);
    CHECK(pointwise_return(m, {0}, {0, 0, 0}).value == Approx(1.0).epsilon(tol));
    CHECK_THROWS_AS(pointwise_return(m, {0}, {1, 0, 1}), Error);
    CHECK_THROWS_AS(pointwise_return(m, {0, 1}, {0, 0, 0}), Error);

    const auto x = corpus::build("xor");
    CHECK(pointwise_return(RaceMarket::fair(x, s1), {0}, {1}).value == 0.0);

    const auto rdn = corpus::build("rdnerr");
    CHECK(pointwise_return(RaceMarket::fair(rdn, s2), {1}, {0}).value == Approx(-1.0).epsilon(tol));
    CHECK(pointwise_return(RaceMarket::fair(rdn), {}, {0}).value == 0.0);
}

TEST_CASE("pointwise returns equal pointwise mutual information and average to the gain") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const auto t = oracle::random_table(rng, 2, 1);
        const auto d = oracle::to_distribution(t);
        for (std::uint32_t mask = 1; mask < 4; ++mask) {
            const SourceEvent wire(mask);
            const auto m = RaceMarket::fair(d, wire);
            double expected = 0.0;
            for (std::size_t k = 0; k < t.rows.size(); ++k) {
                const auto& r = d.support()[k];
                std::vector<std::size_t> message;
                for (auto i : wire.indices()) message.push_back(r.predictors[i]);
                const double got = pointwise_return(m, message, r.target).value;
                // i(s;t) = h(s) - h(s|t) from row sums.
                const double i_st = oracle::h(t, t.rows[k], mask) - oracle::h(t, t.rows[k], mask, 1);
                CHECK(got == Approx(i_st).epsilon(tol));
                expected += static_cast<double>(t.p[k]) * got;
            }
            CHECK(value_of_side_information(m).gain.value == Approx(expected).epsilon(tol));
        }
    }
}

TEST_CASE("simulation is deterministic and converges") {
    const auto tbc = corpus::build("tbc");
    const auto m = RaceMarket::fair(tbc, s1);
    const auto a = simulate_races(m, 1000, 42);
    const auto b = simulate_races(m, 1000, 42);
    CHECK(a.log2_wealth == b.log2_wealth);
    CHECK(a.generator.find("mt19937_64") == 0);
    // Every race pays exactly double with the wire on S1.
    CHECK(a.log2_wealth.back() == 1000.0);

    const auto none = simulate_races(RaceMarket::fair(tbc), 500, 1);
    CHECK(std::all_of(none.log2_wealth.begin(), none.log2_wealth.end(), [](double w) { return w == 0.0; }));

    const auto rdn = RaceMarket::fair(corpus::build("rdnerr"), s2);
    const auto long_run = simulate_races(rdn, 100000, 5);
    CHECK(std::abs(long_run.empirical_rate - long_run.analytic_rate) <= 0.05);
    CHECK(long_run.analytic_rate == Approx(1.0 - 0.811278124459).epsilon(1e-9));
    CHECK_THROWS_AS(simulate_races(rdn, 0, 1), Error);
}

TEST_CASE("accumulator legs on the two-bit copy") {
    const auto t13 = compose_targets(corpus::build("tbc"), std::vector<std::string>{"t1", "t3"});
    const auto one = RaceMarket::fair(t13, s1);
    const auto forward = accumulator_log_return(one, {0}, {0, 0}, {0, 1});
    CHECK(forward.legs[0] == Approx(1.0).epsilon(tol));
    CHECK(forward.legs[1] == 0.0);
    CHECK(forward.total == Approx(1.0).epsilon(tol));
    const auto backward = accumulator_log_return(one, {0}, {0, 0}, {1, 0});
    CHECK(backward.legs[0] == 0.0);
    CHECK(backward.legs[1] == Approx(1.0).epsilon(tol));
    CHECK(backward.total == Approx(1.0).epsilon(tol));

    const auto both = RaceMarket::fair(t13, s12);
    CHECK(accumulator_log_return(both, {0, 0}, {0, 0}, {0, 1}).total == Approx(2.0).epsilon(tol));
    CHECK(accumulator_log_return(both, {0, 0}, {0, 0}, {1, 0}).total == Approx(2.0).epsilon(tol));

    CHECK_THROWS_AS(accumulator_log_return(one, {0}, {0, 0}, {0, 0}), Error);
    CHECK_THROWS_AS(accumulator_log_return(one, {0}, {0, 0}, {0}), Error);
    CHECK_THROWS_AS(accumulator_log_return(one, {0}, {1, 0}, {0, 1}), Error);
}

TEST_CASE("accumulator totals do not depend on the leg order") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const auto t = oracle::random_table(rng, 2, 3, 2);
        const auto d = oracle::to_distribution(t);
        const auto m = RaceMarket::fair(d, s12);
        for (const auto& r : d.support()) {
            const double full = pointwise_return(m, r.predictors, r.target).value;
            std::vector<std::size_t> order{0, 1, 2};
            do {
                const auto acc = accumulator_log_return(m, r.predictors, r.target, order);
                CHECK(acc.total == Approx(full).epsilon(tol));
            } while (std::next_permutation(order.begin(), order.end()));
        }
    }
    // A single leg is the plain pointwise return.
    const auto rdn = RaceMarket::fair(corpus::build("rdnerr"), s2);
    CHECK(accumulator_log_return(rdn, {1}, {0}, {0}).total == Approx(-1.0).epsilon(tol));
}
