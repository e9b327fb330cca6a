#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ppid/corpus.hpp"
#include "ppid/measures.hpp"
#include "support/oracle.hpp"

#include <cmath>

using namespace ppid;
using doctest::Approx;

namespace {

constexpr double tol = 1e-9;

const Realisation& at(const JointDistribution& d, std::initializer_list<const char*> preds, const char* target) {
    std::vector<std::size_t> p;
    std::size_t i = 0;
    for (const char* l : preds) p.push_back(d.schema().predictors[i++].index_of(l));
    std::vector<std::size_t> t;
    const auto parts = std::string(target);
    std::size_t c = 0, start = 0;
    while (true) {
        const auto comma = parts.find(',', start);
        t.push_back(d.schema().target_components[c++].index_of(parts.substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    const auto k = d.find(p, t);
    REQUIRE(k.has_value());
    return d.support()[*k];
}

Event ev(std::size_t var, std::size_t label) { return {{var, label}}; }

const auto s1 = SourceEvent::of({0});
const auto s2 = SourceEvent::of({1});
const auto s12 = SourceEvent::of({0, 1});

}  // namespace

TEST_CASE("pointwise entropy") {
    const auto x = corpus::build("xor");
    CHECK(pointwise_entropy(x, ev(0, 0)).value == Approx(1.0).epsilon(tol));
    CHECK(pointwise_entropy(x, {}).value == 0.0);
    const auto tbep = corpus::build("tbep");
    CHECK(pointwise_entropy(tbep, {{0, 0}, {1, 0}}).value == Approx(2.0).epsilon(tol));
    CHECK_THROWS_AS(pointwise_entropy(corpus::build("and"), {{0, 0}, {2, 1}}), Error);
}

TEST_CASE("pointwise mutual information") {
    const auto pw = corpus::build("pwunq");
    const auto& r = at(pw, {"1", "0"}, "1");
    CHECK(pointwise_mutual_information(pw, pw.source_event(r, s1), pw.target_event(r)).value ==
          Approx(1.0).epsilon(tol));

    // S1 and T are independent in xor.
    const auto x = corpus::build("xor");
    const auto& rx = x.support()[0];
    CHECK(std::abs(pointwise_mutual_information(x, x.source_event(rx, s1), x.target_event(rx)).value) < tol);

    // Misinformation in And: p(t=0|s1=1) = 1/2 against p(t=0) = 3/4.
    const auto a = corpus::build("and");
    const auto& ra = at(a, {"1", "0"}, "0");
    CHECK(pointwise_mutual_information(a, a.source_event(ra, s1), a.target_event(ra)).value ==
          Approx(std::log2(2.0 / 3.0)).epsilon(tol));
}

TEST_CASE("specificity") {
    const auto rdn = corpus::build("rdnerr");
    CHECK(specificity(rdn, s2, at(rdn, {"0", "0"}, "0")).value == Approx(1.0).epsilon(tol));
    const auto tbc = corpus::build("tbc");
    CHECK(specificity(tbc, s12, tbc.support()[2]).value == Approx(2.0).epsilon(tol));
    // A constant predictor carries no specificity.
    std::istringstream in("1/2\t0\t0\n1/2\t0\t1\n");
    const auto c = load_distribution(in, InputFormat::tsv);
    CHECK(specificity(c, s1, c.support()[0]).value == 0.0);
}

TEST_CASE("ambiguity") {
    const auto a = corpus::build("and");
    CHECK(ambiguity(a, s1, at(a, {"0", "0"}, "0")).value == Approx(std::log2(1.5)).epsilon(tol));
    const auto tbc = corpus::build("tbc");
    for (const auto& r : tbc.support()) {
        for (auto src : {s1, s2, s12}) CHECK(ambiguity(tbc, src, r).value == 0.0);
    }
}

TEST_CASE("conditional specificity and ambiguity") {
    const auto tbc = corpus::build("tbc");
    const auto& r = tbc.support()[1];
    CHECK(conditional_specificity(tbc, s1, r, {0}).value == 0.0);
    CHECK(conditional_specificity(tbc, s2, r, {0}).value == Approx(1.0).epsilon(tol));
    CHECK(conditional_specificity(tbc, s2, r, {}).value == Approx(specificity(tbc, s2, r).value).epsilon(tol));
    CHECK(conditional_ambiguity(tbc, s2, r, {0, 2}).value == 0.0);
    CHECK(conditional_ambiguity(tbc, s2, r, {}).value == Approx(1.0).epsilon(tol));

    const auto rdn = corpus::build("rdnerr");
    CHECK(conditional_ambiguity(rdn, s2, at(rdn, {"0", "0"}, "0"), {0}).value ==
          Approx(std::log2(4.0 / 3.0)).epsilon(tol));
}

TEST_CASE("co-information") {
    const auto x = corpus::build("xor");
    for (const auto& r : x.support()) CHECK(co_information(x, r).value == Approx(-1.0).epsilon(tol));
    const auto tbc = corpus::build("tbc");
    for (const auto& r : tbc.support()) CHECK(std::abs(co_information(tbc, r).value) < tol);
    CHECK_THROWS_AS(co_information(corpus::build("tbep"), corpus::build("tbep").support()[0]), Error);
}

TEST_CASE("averages") {
    const auto pw = corpus::build("pwunq");
    CHECK(mutual_information(pw, s1).value == Approx(0.5).epsilon(tol));
    CHECK(average(pw, [&](const Realisation& r) { return specificity(pw, s2, r); }).value ==
          Approx(1.5).epsilon(tol));
    CHECK(average(pw, [](const Realisation&) { return 0.0; }).value == 0.0);
    CHECK_THROWS_AS(average(pw, [](const Realisation&) { return INFINITY; }), Error);
}

TEST_CASE("other bases scale every quantity") {
    const auto a = corpus::build("and");
    const auto& r = a.support()[0];
    const double bits = ambiguity(a, s1, r).value;
    const auto nats = ambiguity(a, s1, r, std::exp(1.0));
    CHECK(nats.base == Approx(std::exp(1.0)));
    CHECK(nats.value == Approx(bits * std::log(2.0)).epsilon(tol));
    CHECK_THROWS_AS(ambiguity(a, s1, r, 1.0), Error);
    CHECK_THROWS_AS(ambiguity(a, s1, r, -2.0), Error);
}

TEST_CASE("entropies agree with direct row summation on random distributions") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + trial % 2;
        const int m = 1 + trial % 3 / 2;
        const auto t = oracle::random_table(rng, n, m);
        const auto d = oracle::to_distribution(t);
        std::vector<std::size_t> comps;
        for (int c = 0; c < m; ++c) comps.push_back(c);
        for (std::size_t k = 0; k < t.rows.size(); ++k) {
            const auto& r = d.support()[k];
            for (std::uint32_t a = 1; a < (1u << n); ++a) {
                const SourceEvent src(a);
                CHECK(specificity(d, src, r).value == Approx(oracle::h(t, t.rows[k], a)).epsilon(tol));
                CHECK(ambiguity(d, src, r).value ==
                      Approx(oracle::h(t, t.rows[k], a, oracle::all_components(t))).epsilon(tol));
                if (m == 2) {
                    CHECK(conditional_specificity(d, src, r, {1}).value ==
                          Approx(oracle::h(t, t.rows[k], a, 0b10)).epsilon(tol));
                }
            }
        }
    }
}

TEST_CASE("measure identities on random distributions") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + trial % 2;
        const auto t = oracle::random_table(rng, n, 1);
        const auto d = oracle::to_distribution(t);
        for (const auto& r : d.support()) {
            const auto target = d.target_event(r);
            for (std::uint32_t a = 1; a < (1u << n); ++a) {
                const SourceEvent sa(a);
                const auto ea = d.source_event(r, sa);
                const double spec = specificity(d, sa, r).value;
                const double amb = ambiguity(d, sa, r).value;
                CHECK(spec >= 0.0);
                CHECK(amb >= 0.0);
                CHECK(pointwise_mutual_information(d, ea, target).value == Approx(spec - amb).epsilon(tol));
                for (std::uint32_t b = 1; b < (1u << n); ++b) {
                    const SourceEvent sb(b);
                    const auto eb = d.source_event(r, sb);
                    const auto eu = d.source_event(r, sa.unite(sb));
                    CHECK(pointwise_entropy(d, eu).value ==
                          Approx(spec + conditional_entropy(d, eb, ea).value).epsilon(tol));
                    CHECK(conditional_entropy(d, eu, target).value ==
                          Approx(amb + conditional_entropy(d, eb, concat(ea, target)).value).epsilon(tol));
                    if ((a & b) == a) {
                        CHECK(spec <= specificity(d, sb, r).value + tol);
                        CHECK(amb <= ambiguity(d, sb, r).value + tol);
                    }
                }
            }
        }
        for (std::uint32_t a = 1; a < (1u << n); ++a) CHECK(mutual_information(d, SourceEvent(a)).value >= -tol);
    }
}

TEST_CASE("an event does not misinform about itself") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        auto t = oracle::random_table(rng, 1, 1);
        for (auto& row : t.rows) row[1] = row[0];  // target copies the predictor
        // Merge duplicates created by the copy.
        const auto d = oracle::to_distribution(t);
        for (const auto& r : d.support()) CHECK(ambiguity(d, s1, r).value == 0.0);
    }
}
