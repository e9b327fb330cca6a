#pragma once

#include "ppid/distribution.hpp"

#include <cmath>
#include <vector>

namespace ppid {

/// An information quantity together with the logarithm base it was
/// evaluated in (2 gives bits).
struct InfoValue {
    double value = 0.0;
    double base = 2.0;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

/// log of a probability ratio in the given base. Exact unit ratios give 0.
double log_in_base(double x, double base);

/// h(event | given) = -log p(event | given). Throws on zero probability.
InfoValue conditional_entropy(const JointDistribution& dist, const Event& event, const Event& given,
                              double base = 2.0);

/// h(event) = -log p(event).
InfoValue pointwise_entropy(const JointDistribution& dist, const Event& event, double base = 2.0);

/// i(source; target) = log p(target | source) / p(target). Signed.
InfoValue pointwise_mutual_information(const JointDistribution& dist, const Event& source, const Event& target,
                                       double base = 2.0);

/// i(source; target | given) = log p(target | source, given) / p(target | given).
InfoValue conditional_pointwise_mutual_information(const JointDistribution& dist, const Event& source,
                                                   const Event& target, const Event& given, double base = 2.0);

/// Specificity i+(a -> t) = h(a). Does not depend on the target event.
InfoValue specificity(const JointDistribution& dist, SourceEvent a, const Realisation& r, double base = 2.0);

/// Ambiguity i-(a -> t) = h(a | t) against the full target of `r`.
InfoValue ambiguity(const JointDistribution& dist, SourceEvent a, const Realisation& r, double base = 2.0);

/// h(a | given), where `given` lists target components whose realised
/// events in `r` are conditioned on.
InfoValue conditional_specificity(const JointDistribution& dist, SourceEvent a, const Realisation& r,
                                  const std::vector<std::size_t>& given, double base = 2.0);

/// h(a | listed target component events of r). An empty list gives h(a).
InfoValue conditional_ambiguity(const JointDistribution& dist, SourceEvent a, const Realisation& r,
                                const std::vector<std::size_t>& targets, double base = 2.0);

/// i(s1;t) + i(s2;t) - i(s1,s2;t). Bivariate distributions only.
InfoValue co_information(const JointDistribution& dist, const Realisation& r, double base = 2.0);

/// Probability-weighted mean of `functional(r)` over the support.
/// The functional returns a double or an InfoValue.
template <typename Functional>
InfoValue average(const JointDistribution& dist, Functional&& functional, double base = 2.0) {
    CompensatedSum sum;
    for (const auto& r : dist.support()) {
        const auto v = functional(r);
        double x;
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, InfoValue>) {
            x = v.value;
        } else {
            x = static_cast<double>(v);
        }
        if (!std::isfinite(x)) throw Error("functional is undefined on part of the support");
        sum.add(r.probability.to_double() * x);
    }
    return {sum.value(), base};
}

/// I(S_a; T) as the average of pointwise mutual information.
InfoValue mutual_information(const JointDistribution& dist, SourceEvent a, double base = 2.0);

}  // namespace ppid
