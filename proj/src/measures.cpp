#include "ppid/measures.hpp"

#include <fmt/format.h>

namespace ppid {

namespace {

void check_base(double base) {
    if (!(base > 0.0) || base == 1.0 || !std::isfinite(base)) {
        throw Error(fmt::format("invalid logarithm base {}", base));
    }
}

Probability positive(const JointDistribution& dist, const Event& e, const char* what) {
    auto p = dist.probability(e);
    if (!p.is_positive()) throw Error(fmt::format("{} has zero probability", what));
    return p;
}

}  // namespace

double log_in_base(double x, double base) {
    check_base(base);
    if (x == 1.0) return 0.0;
    if (base == 2.0) return std::log2(x);
    return std::log2(x) / std::log2(base);
}

InfoValue conditional_entropy(const JointDistribution& dist, const Event& event, const Event& given, double base) {
    const auto joint = positive(dist, concat(event, given), "event");
    const auto cond = given.empty() ? (dist.is_exact() ? Probability::one() : Probability(1.0))
                                    : positive(dist, given, "conditioning event");
    return {-log_in_base((joint / cond).to_double(), base), base};
}

InfoValue pointwise_entropy(const JointDistribution& dist, const Event& event, double base) {
    return conditional_entropy(dist, event, {}, base);
}

InfoValue pointwise_mutual_information(const JointDistribution& dist, const Event& source, const Event& target,
                                       double base) {
    return conditional_pointwise_mutual_information(dist, source, target, {}, base);
}

InfoValue conditional_pointwise_mutual_information(const JointDistribution& dist, const Event& source,
                                                   const Event& target, const Event& given, double base) {
    const auto p_sg = given.empty() ? Probability::one() : positive(dist, given, "conditioning event");
    const auto p_source = positive(dist, concat(source, given), "source event");
    const auto p_target = positive(dist, concat(target, given), "target event");
    const auto p_joint = positive(dist, concat(concat(source, target), given), "joint event");
    // p(t|s,g) / p(t|g) = p(s,t,g) p(g) / (p(s,g) p(t,g))
    const auto ratio = (p_joint * p_sg) / (p_source * p_target);
    return {log_in_base(ratio.to_double(), base), base};
}

InfoValue specificity(const JointDistribution& dist, SourceEvent a, const Realisation& r, double base) {
    return pointwise_entropy(dist, dist.source_event(r, a), base);
}

InfoValue ambiguity(const JointDistribution& dist, SourceEvent a, const Realisation& r, double base) {
    return conditional_entropy(dist, dist.source_event(r, a), dist.target_event(r), base);
}

InfoValue conditional_specificity(const JointDistribution& dist, SourceEvent a, const Realisation& r,
                                  const std::vector<std::size_t>& given, double base) {
    return conditional_entropy(dist, dist.source_event(r, a), dist.target_event(r, given), base);
}

InfoValue conditional_ambiguity(const JointDistribution& dist, SourceEvent a, const Realisation& r,
                                const std::vector<std::size_t>& targets, double base) {
    return conditional_entropy(dist, dist.source_event(r, a), dist.target_event(r, targets), base);
}

InfoValue co_information(const JointDistribution& dist, const Realisation& r, double base) {
    if (dist.predictor_count() != 2) throw Error("co-information needs exactly two predictors");
    const auto t = dist.target_event(r);
    auto pmi = [&](SourceEvent a) { return pointwise_mutual_information(dist, dist.source_event(r, a), t, base).value; };
    return {pmi(SourceEvent::of({0})) + pmi(SourceEvent::of({1})) - pmi(SourceEvent::of({0, 1})), base};
}

InfoValue mutual_information(const JointDistribution& dist, SourceEvent a, double base) {
    return average(
        dist,
        [&](const Realisation& r) {
            return pointwise_mutual_information(dist, dist.source_event(r, a), dist.target_event(r), base);
        },
        base);
}

}  // namespace ppid
