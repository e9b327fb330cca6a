#include "ppid/verify.hpp"

#include "ppid/decomposition.hpp"
#include "ppid/measures.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace ppid {

namespace {

class Property {
public:
    Property(std::string name, double tolerance) : tol_(tolerance) { result_.name = std::move(name); }

    /// Records a check whose deviation from the expected relation is `deviation`
    /// (zero or negative means satisfied).
    template <typename Describe>
    void check(double deviation, Describe&& describe) {
        ++result_.checks;
        if (!(deviation <= tol_)) {
            ++result_.violations;
            result_.passed = false;
            if (std::isnan(deviation)) deviation = std::numeric_limits<double>::infinity();
            result_.worst = std::max(result_.worst, deviation);
            if (result_.detail.empty()) result_.detail = describe();
        }
    }

    PropertyResult take() { return std::move(result_); }

private:
    double tol_;
    PropertyResult result_;
};

std::string where(const JointDistribution& dist, std::size_t i) {
    const auto& r = dist.support()[i];
    std::string s;
    for (std::size_t v = 0; v < r.predictors.size(); ++v) s += dist.label(v, r.predictors[v]) + " ";
    return fmt::format("realisation {} ({}-> {})", i, s, dist.target_label(r));
}

}  // namespace

std::vector<PropertyResult> run_invariant_suite(const JointDistribution& dist, const VerifyOptions& options) {
    const double tol = options.tolerance;
    const double b = options.base;
    const auto n = dist.predictor_count();
    const auto& support = dist.support();
    const RedundancyLattice lattice(n, options.lattice_cap);
    const auto& sources = lattice.source_events();
    const SourceEvent everything = SourceEvent::full(n);

    std::vector<PropertyResult> out;

    // Pointwise measures.
    {
        Property pmi("pointwise mutual information = specificity - ambiguity", tol);
        Property chain("entropy chain rule h(a,b) = h(a) + h(b|a), with and without t", tol);
        Property mono("specificity and ambiguity increase with the source event", tol);
        for (std::size_t i = 0; i < support.size(); ++i) {
            const auto& r = support[i];
            const auto t = dist.target_event(r);
            for (auto a : sources) {
                const auto ea = dist.source_event(r, a);
                const double spec = specificity(dist, a, r, b).value;
                const double amb = ambiguity(dist, a, r, b).value;
                const double i_at = pointwise_mutual_information(dist, ea, t, b).value;
                pmi.check(std::abs(i_at - (spec - amb)), [&] {
                    return fmt::format("{} source {}: i = {}, h - h|t = {}", where(dist, i), a.to_string(), i_at,
                                       spec - amb);
                });
                for (auto c : sources) {
                    const auto ec = dist.source_event(r, c);
                    const auto eu = dist.source_event(r, a.unite(c));
                    const double lhs = pointwise_entropy(dist, eu, b).value;
                    const double rhs = spec + conditional_entropy(dist, ec, ea, b).value;
                    const double lhs_t = conditional_entropy(dist, eu, t, b).value;
                    const double rhs_t = amb + conditional_entropy(dist, ec, concat(ea, t), b).value;
                    chain.check(std::max(std::abs(lhs - rhs), std::abs(lhs_t - rhs_t)), [&] {
                        return fmt::format("{} sources {},{}", where(dist, i), a.to_string(), c.to_string());
                    });
                    if (a.subset_of(c)) {
                        const double dev = std::max(spec - specificity(dist, c, r, b).value,
                                                    amb - ambiguity(dist, c, r, b).value);
                        mono.check(dev, [&] {
                            return fmt::format("{} {} within {}", where(dist, i), a.to_string(), c.to_string());
                        });
                    }
                }
            }
        }
        Property avg("average mutual information non-negative", tol);
        for (auto a : sources) {
            const double mi = mutual_information(dist, a, b).value;
            avg.check(-mi, [&] { return fmt::format("I(S{};T) = {}", a.to_string(), mi); });
        }
        out.push_back(pmi.take());
        out.push_back(chain.take());
        out.push_back(mono.take());
        out.push_back(avg.take());
    }

    DecompositionOptions dopts;
    dopts.base = b;
    dopts.lattice_cap = options.lattice_cap;
    const auto table = decompose(dist, dopts);
    const auto& projected = table.distribution;

    // Theorem 1 axioms, Theorem 2 monotonicity, Theorem 3 non-negativity,
    // closed form, totals.
    {
        Property axioms("axioms: symmetry, superset members, self-redundancy", tol);
        Property mono("redundancy monotone on the lattice", tol);
        Property nonneg("partial specificity and ambiguity non-negative", tol);
        Property closed("closed-form partial atoms equal Moebius inversion", tol);
        Property totals("partial atoms sum to h(s), h(s|t) and I(S;T)", tol);

        for (std::size_t i = 0; i < table.realisations.size(); ++i) {
            const auto& row = table.realisations[i];
            const auto& r = row.realisation;
            SourceValues hp, hm;
            for (auto a : sources) {
                hp[a.mask()] = specificity(projected, a, r, b).value;
                hm[a.mask()] = ambiguity(projected, a, r, b).value;
            }
            for (std::size_t k = 0; k < lattice.size(); ++k) {
                const auto& alpha = lattice.node(k);
                const auto& atoms = row.nodes[k];
                auto at = [&] { return fmt::format("{} node {}", where(projected, i), alpha.to_string()); };

                // Member order does not matter.
                auto members = alpha.sources();
                std::reverse(members.begin(), members.end());
                double rp = std::numeric_limits<double>::infinity(), rm = rp;
                for (auto a : members) {
                    rp = std::min(rp, hp[a.mask()]);
                    rm = std::min(rm, hm[a.mask()]);
                }
                axioms.check(std::max(std::abs(rp - atoms.r_plus), std::abs(rm - atoms.r_minus)), at);
                // A source containing a member adds nothing.
                for (auto c : sources) {
                    const bool covers = std::any_of(alpha.sources().begin(), alpha.sources().end(),
                                                    [&](SourceEvent a) { return a.subset_of(c); });
                    if (!covers) continue;
                    axioms.check(std::max(std::abs(std::min(rp, hp[c.mask()]) - atoms.r_plus),
                                          std::abs(std::min(rm, hm[c.mask()]) - atoms.r_minus)),
                                 at);
                }
                if (alpha.size() == 1) {
                    const auto a = alpha.sources().front();
                    axioms.check(std::max(std::abs(atoms.r_plus - hp[a.mask()]), std::abs(atoms.r_minus - hm[a.mask()])),
                                 at);
                }

                for (std::size_t j = 0; j < lattice.size(); ++j) {
                    if (!lattice.leq(k, j)) continue;
                    const auto& above = row.nodes[j];
                    mono.check(std::max(atoms.r_plus - above.r_plus, atoms.r_minus - above.r_minus), [&] {
                        return fmt::format("{} below {}", at(), lattice.node(j).to_string());
                    });
                }

                nonneg.check(std::max(-atoms.pi_plus, -atoms.pi_minus), [&] {
                    return fmt::format("{}: pi+ = {}, pi- = {}", at(), atoms.pi_plus, atoms.pi_minus);
                });

                const double cp = closed_form_partial(lattice, hp, alpha);
                const double cm = closed_form_partial(lattice, hm, alpha);
                closed.check(std::max(std::abs(cp - atoms.pi_plus), std::abs(cm - atoms.pi_minus)), at);
            }

            CompensatedSum sp, sm;
            for (const auto& a : row.nodes) {
                sp.add(a.pi_plus);
                sm.add(a.pi_minus);
            }
            totals.check(std::max(std::abs(sp.value() - hp[everything.mask()]),
                                  std::abs(sm.value() - hm[everything.mask()])),
                         [&] { return where(projected, i); });
        }
        CompensatedSum total;
        for (const auto& a : table.averages) total.add(a.pi);
        const double mi = mutual_information(projected, everything, b).value;
        totals.check(std::abs(total.value() - mi),
                     [&] { return fmt::format("sum of averaged atoms {} against I(S;T) {}", total.value(), mi); });

        out.push_back(axioms.take());
        out.push_back(mono.take());
        out.push_back(nonneg.take());
        out.push_back(closed.take());
        out.push_back(totals.take());
    }

    // Two-event partitions.
    {
        Property inv("redundancy unchanged by two-event target coarsening", tol);
        for (std::size_t i = 0; i < support.size(); ++i) {
            for (const auto& alpha : lattice.nodes()) {
                const auto rep = two_event_invariance_check(dist, alpha, i, b);
                inv.check(rep.max_difference,
                          [&] { return fmt::format("{} node {}", where(dist, i), alpha.to_string()); });
            }
        }
        out.push_back(inv.take());
    }

    if (dist.component_count() < 2) return out;

    // Conditional forms and the target chain rule on every component pair.
    {
        Property plus_given("r+(-> t1 | t2) = r-(-> t2)", tol);
        Property independent("r+ independent of the target event and variable", tol);
        Property minus_given("r-(-> t1 | t2) = r-(-> t1,t2)", tol);
        Property chain("target chain rule, both orders", tol);
        const auto m = dist.component_count();

        for (std::size_t c1 = 0; c1 < m; ++c1) {
            const auto single = compose_targets(dist, std::vector<std::size_t>{c1});
            for (std::size_t i = 0; i < single.support().size(); ++i) {
                const auto& rs = single.support()[i];
                const auto& rf = *std::find_if(support.begin(), support.end(), [&](const Realisation& r) {
                    return r.predictors == rs.predictors;
                });
                for (const auto& alpha : lattice.nodes()) {
                    independent.check(std::abs(rmin_plus(single, alpha, rs, b).value - rmin_plus(dist, alpha, rf, b).value),
                                      [&] { return fmt::format("component {} node {}", c1 + 1, alpha.to_string()); });
                }
            }
            for (std::size_t c2 = 0; c2 < m; ++c2) {
                if (c1 == c2) continue;
                for (std::size_t i = 0; i < support.size(); ++i) {
                    const auto& r = support[i];
                    for (const auto& alpha : lattice.nodes()) {
                        auto at = [&] {
                            return fmt::format("{} node {} t{} given t{}", where(dist, i), alpha.to_string(), c1 + 1,
                                               c2 + 1);
                        };
                        plus_given.check(std::abs(rmin_plus_conditional(dist, alpha, r, {c2}, b).value -
                                                  rmin_minus_conditional(dist, alpha, r, {c2}, {}, b).value),
                                         at);
                        minus_given.check(std::abs(rmin_minus_conditional(dist, alpha, r, {c1}, {c2}, b).value -
                                                   rmin_minus_conditional(dist, alpha, r, {c1, c2}, {}, b).value),
                                          at);
                    }
                }
                if (c2 > c1) {
                    ChainRuleOptions copts;
                    copts.first = c1;
                    copts.second = c2;
                    copts.base = b;
                    copts.lattice_cap = options.lattice_cap;
                    const auto rep = verify_target_chain_rule(dist, std::nullopt, copts);
                    chain.check(std::max(rep.max_residual, rep.max_atom_residual),
                                [&] { return fmt::format("components t{}, t{}", c1 + 1, c2 + 1); });
                }
            }
        }
        out.push_back(plus_given.take());
        out.push_back(independent.take());
        out.push_back(minus_given.take());
        out.push_back(chain.take());
    }
    return out;
}

}  // namespace ppid
