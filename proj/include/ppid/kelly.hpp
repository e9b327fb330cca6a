#pragma once

#include "ppid/distribution.hpp"
#include "ppid/measures.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ppid::kelly {

/// A horse race over the target of a joint distribution.
///
/// Each horse is a target outcome with positive probability. Odds are held
/// as implied probabilities q(t) = 1/o(t). The gambler may receive a side
/// wire: the realised events of a subset of predictors.
class RaceMarket {
public:
    /// Fair odds o(t) = 1/p(t).
    static RaceMarket fair(JointDistribution joint, std::optional<SourceEvent> wire = std::nullopt);

    /// Custom odds, one payout multiplier per horse in horses() order. Throws
    /// Error on non-positive odds or a track take (sum of 1/o above 1).
    static RaceMarket with_odds(JointDistribution joint, const std::vector<Probability>& payouts,
                                std::optional<SourceEvent> wire = std::nullopt);

    const JointDistribution& joint() const { return joint_; }
    const std::optional<SourceEvent>& wire() const { return wire_; }
    const std::vector<std::vector<std::size_t>>& horses() const { return horses_; }
    const Probability& win_probability(std::size_t horse) const { return win_.at(horse); }
    const Probability& implied_probability(std::size_t horse) const { return implied_.at(horse); }
    double odds(std::size_t horse) const { return 1.0 / implied_.at(horse).to_double(); }
    std::size_t horse_of(const std::vector<std::size_t>& target) const;

    RaceMarket with_wire(std::optional<SourceEvent> wire) const;

    static constexpr double tolerance = 1e-9;

private:
    RaceMarket(JointDistribution joint, std::optional<SourceEvent> wire);

    JointDistribution joint_;
    std::optional<SourceEvent> wire_;
    std::vector<std::vector<std::size_t>> horses_;
    std::vector<Probability> win_;
    std::vector<Probability> implied_;
};

/// W* = sum_t p(t) log[p(t) o(t)], betting b*(t) = p(t) with no wire.
InfoValue optimal_doubling_rate(const RaceMarket& market, double base = 2.0);

/// W*(T|S) = sum p(s,t) log[p(t|s) o(t)], betting b*(t|s) = p(t|s).
InfoValue conditional_doubling_rate(const RaceMarket& market, double base = 2.0);

struct SideInformationValue {
    InfoValue without_wire;
    InfoValue with_wire;
    InfoValue gain;                // W*(T|S) - W*(T)
    InfoValue mutual_information;  // I(S;T)
};

/// Increase in doubling rate from the wire, alongside I(S;T).
SideInformationValue value_of_side_information(const RaceMarket& market, double base = 2.0);

/// Log return of one race won by `winner` when the wire reads `message`
/// (one label per wire predictor, in index order). With fair odds this is
/// i(s;t). Without a wire, pass an empty message.
InfoValue pointwise_return(const RaceMarket& market, const std::vector<std::size_t>& message,
                           const std::vector<std::size_t>& winner, double base = 2.0);

struct Trajectory {
    std::string generator;
    std::uint64_t seed = 0;
    std::vector<double> log2_wealth;  // after each race, starting wealth 1
    double analytic_rate = 0.0;
    double empirical_rate = 0.0;
};

/// Simulates m races with proportional betting. Outcomes are drawn from the
/// joint by inverse CDF over support order; deterministic for a seed.
Trajectory simulate_races(const RaceMarket& market, std::size_t races, std::uint64_t seed);

struct AccumulatorReturn {
    std::vector<std::size_t> order;
    std::vector<double> legs;  // i(s; t_k | earlier legs)
    double total = 0.0;
};

/// Chained bet over the target components in `order`. Each leg bets
/// p(t_k | s, earlier) at fair conditional odds 1/p(t_k | earlier).
AccumulatorReturn accumulator_log_return(const RaceMarket& market, const std::vector<std::size_t>& message,
                                         const std::vector<std::size_t>& winner, const std::vector<std::size_t>& order,
                                         double base = 2.0);

}  // namespace ppid::kelly
