#include "ppid/kelly.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace ppid::kelly {

RaceMarket::RaceMarket(JointDistribution joint, std::optional<SourceEvent> wire)
    : joint_(std::move(joint)), wire_(wire) {
    if (!joint_.schema().has_target()) throw Error("race market needs a target");
    if (wire_ && wire_->indices().back() >= joint_.predictor_count()) {
        throw Error("wire refers to a predictor that does not exist");
    }
    for (const auto& r : joint_.support()) {
        if (std::find(horses_.begin(), horses_.end(), r.target) == horses_.end()) horses_.push_back(r.target);
    }
    for (const auto& h : horses_) {
        Event e;
        for (std::size_t c = 0; c < h.size(); ++c) e.push_back({joint_.schema().component_variable(c), h[c]});
        win_.push_back(joint_.probability(e));
    }
}

RaceMarket RaceMarket::fair(JointDistribution joint, std::optional<SourceEvent> wire) {
    RaceMarket m(std::move(joint), wire);
    m.implied_ = m.win_;
    return m;
}

RaceMarket RaceMarket::with_odds(JointDistribution joint, const std::vector<Probability>& payouts,
                                 std::optional<SourceEvent> wire) {
    RaceMarket m(std::move(joint), wire);
    if (payouts.size() != m.horses_.size()) {
        throw Error(fmt::format("expected odds for {} horses, got {}", m.horses_.size(), payouts.size()));
    }
    Probability total = Probability::zero();
    for (const auto& o : payouts) {
        if (!o.is_positive() || !std::isfinite(o.to_double())) throw Error("odds must be positive and finite");
        m.implied_.push_back(Probability::one() / o);
        total += m.implied_.back();
    }
    if (total.to_double() > 1.0 + tolerance) {
        throw Error(fmt::format("odds carry a track take: sum of 1/o(t) is {:.12g}", total.to_double()));
    }
    return m;
}

RaceMarket RaceMarket::with_wire(std::optional<SourceEvent> wire) const {
    RaceMarket m(joint_, wire);
    m.implied_ = implied_;
    return m;
}

std::size_t RaceMarket::horse_of(const std::vector<std::size_t>& target) const {
    auto it = std::find(horses_.begin(), horses_.end(), target);
    if (it == horses_.end()) throw Error("winner is not a horse with positive probability");
    return static_cast<std::size_t>(it - horses_.begin());
}

namespace {

Event message_event(const RaceMarket& market, const std::vector<std::size_t>& message) {
    Event e;
    if (!market.wire()) {
        if (!message.empty()) throw Error("message given but the market has no wire");
        return e;
    }
    const auto idx = market.wire()->indices();
    if (idx.size() != message.size()) {
        throw Error(fmt::format("wire carries {} predictors, message has {}", idx.size(), message.size()));
    }
    for (std::size_t k = 0; k < idx.size(); ++k) e.push_back({idx[k], message[k]});
    return e;
}

Event winner_event(const RaceMarket& market, const std::vector<std::size_t>& winner) {
    if (winner.size() != market.joint().component_count()) throw Error("winner must label every target component");
    Event e;
    for (std::size_t c = 0; c < winner.size(); ++c) e.push_back({market.joint().schema().component_variable(c), winner[c]});
    return e;
}

/// log of b(t|s) o(t) = log p(s,t) / (p(s) q(t)), exact where the masses are.
double race_log_return(const RaceMarket& market, const Realisation& r, double base) {
    const auto& dist = market.joint();
    const auto horse = market.horse_of(r.target);
    const Event s = market.wire() ? dist.source_event(r, *market.wire()) : Event{};
    const auto t = dist.target_event(r);
    const auto p_st = dist.probability(concat(s, t));
    const auto p_s = s.empty() ? Probability::one() : dist.probability(s);
    const auto ratio = p_st / (p_s * market.implied_probability(horse));
    return log_in_base(ratio.to_double(), base);
}

}  // namespace

InfoValue optimal_doubling_rate(const RaceMarket& market, double base) {
    CompensatedSum sum;
    for (std::size_t h = 0; h < market.horses().size(); ++h) {
        const auto p = market.win_probability(h);
        sum.add(p.to_double() * log_in_base((p / market.implied_probability(h)).to_double(), base));
    }
    return {sum.value(), base};
}

InfoValue conditional_doubling_rate(const RaceMarket& market, double base) {
    return average(market.joint(), [&](const Realisation& r) { return race_log_return(market, r, base); }, base);
}

SideInformationValue value_of_side_information(const RaceMarket& market, double base) {
    if (!market.wire()) throw Error("value of side information needs a wire");
    SideInformationValue v;
    v.without_wire = optimal_doubling_rate(market, base);
    v.with_wire = conditional_doubling_rate(market, base);
    v.gain = {v.with_wire.value - v.without_wire.value, base};
    v.mutual_information = mutual_information(market.joint(), *market.wire(), base);
    return v;
}

InfoValue pointwise_return(const RaceMarket& market, const std::vector<std::size_t>& message,
                           const std::vector<std::size_t>& winner, double base) {
    const auto& dist = market.joint();
    const auto s = message_event(market, message);
    const auto t = winner_event(market, winner);
    const auto p_st = dist.probability(concat(s, t));
    if (!p_st.is_positive()) throw Error("message and winner never occur together");
    const auto p_s = s.empty() ? Probability::one() : dist.probability(s);
    const auto horse = market.horse_of(winner);
    return {log_in_base((p_st / (p_s * market.implied_probability(horse))).to_double(), base), base};
}

Trajectory simulate_races(const RaceMarket& market, std::size_t races, std::uint64_t seed) {
    if (races == 0) throw Error("need at least one race");
    const auto& support = market.joint().support();
    std::vector<double> cdf;
    std::vector<double> returns;
    double acc = 0.0;
    for (const auto& r : support) {
        acc += r.probability.to_double();
        cdf.push_back(acc);
        returns.push_back(race_log_return(market, r, 2.0));
    }

    Trajectory out;
    out.generator = "mt19937_64; u = (x >> 11) * 2^-53; inverse CDF over support order";
    out.seed = seed;
    out.analytic_rate = market.wire() ? conditional_doubling_rate(market).value : optimal_doubling_rate(market).value;
    out.log2_wealth.reserve(races);

    std::mt19937_64 rng(seed);
    CompensatedSum wealth;
    for (std::size_t k = 0; k < races; ++k) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        auto idx = static_cast<std::size_t>(it - cdf.begin());
        if (idx >= support.size()) idx = support.size() - 1;
        wealth.add(returns[idx]);
        out.log2_wealth.push_back(wealth.value());
    }
    out.empirical_rate = out.log2_wealth.back() / static_cast<double>(races);
    return out;
}

AccumulatorReturn accumulator_log_return(const RaceMarket& market, const std::vector<std::size_t>& message,
                                         const std::vector<std::size_t>& winner, const std::vector<std::size_t>& order,
                                         double base) {
    const auto& dist = market.joint();
    const auto m = dist.component_count();
    std::set<std::size_t> seen(order.begin(), order.end());
    if (order.size() != m || seen.size() != m || *seen.rbegin() >= m) {
        throw Error("accumulator order must be a permutation of the target components");
    }
    const auto s = message_event(market, message);
    const auto t = winner_event(market, winner);
    if (!dist.probability(concat(s, t)).is_positive()) throw Error("message and winner never occur together");

    AccumulatorReturn out;
    out.order = order;
    Event earlier;
    CompensatedSum total;
    for (auto c : order) {
        const Event leg{t[c]};
        const double r =
            s.empty() ? 0.0 : conditional_pointwise_mutual_information(dist, s, leg, earlier, base).value;
        out.legs.push_back(r);
        total.add(r);
        earlier.push_back(t[c]);
    }
    out.total = total.value();
    return out;
}

}  // namespace ppid::kelly
