#pragma once

// rho-scaled model rewards: r_i = (phi_i / phi*_C)^rho * v(C), with the rho
// upper bounds that keep the allocation individually rational (each member
// gets at least their standalone value) and grand-coalition stable (the top
// member of any sub-coalition already gets at least that sub-coalition's
// value, so no group gains by defecting).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "coopshap/game.hpp"
#include "coopshap/valuation.hpp"

namespace coopshap {

// Slack for all >= comparisons in checks; double-precision noise floor at
// this problem scale.
inline constexpr double kCheckTol = 1e-12;

struct RewardAllocation {
  CoalitionMask coalition = 0;
  double rho = 0.0;
  Scheme scheme = Scheme::additive;
  std::vector<int> players;     // coalition members, ascending
  std::vector<double> rewards;  // parallel to players

  double reward_for(int player) const {
    for (std::size_t k = 0; k < players.size(); ++k) {
      if (players[k] == player) return rewards[k];
    }
    throw std::out_of_range("RewardAllocation: player not in coalition");
  }
  double max_reward() const { return *std::max_element(rewards.begin(), rewards.end()); }
};

// Normalized reward factor (phi_i / phi*)^rho with the corner conventions:
//   phi* = 0          -> 1 for everyone (0/0 := 1, so weak efficiency holds)
//   phi_i = 0 < phi*  -> 1 at rho = 0 (0^0 := 1, the everyone-gets-v_C limit),
//                        0 for rho > 0
inline double reward_factor(double phi_i, double phi_star, double rho) {
  if (phi_star == 0.0) return 1.0;
  if (phi_i == 0.0) return rho == 0.0 ? 1.0 : 0.0;
  return std::pow(phi_i / phi_star, rho);
}

// Distributes v(coalition) among its members. The valuation must cover the
// full player set; phi*_C is the max of phi over coalition members.
inline RewardAllocation allocate(const Game& game, const ValuationVector& valuation,
                                 CoalitionMask coalition, double rho) {
  const int n = game.player_count();
  if (valuation.phi.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("allocate: valuation length does not match player count");
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("allocate: rho must be in [0, 1]");
  if (coalition == 0) throw std::invalid_argument("allocate: coalition must be nonempty");

  const double coalition_value = game.value(coalition);
  RewardAllocation out;
  out.coalition = coalition;
  out.rho = rho;
  out.scheme = valuation.scheme;
  out.players = coalition_members(coalition);

  double phi_star = 0.0;
  for (int i : out.players) phi_star = std::max(phi_star, valuation.phi[i]);

  out.rewards.reserve(out.players.size());
  for (int i : out.players) {
    out.rewards.push_back(reward_factor(valuation.phi[i], phi_star, rho) * coalition_value);
  }
  return out;
}

struct RhoConstraint {
  int player = -1;
  CoalitionMask coalition = 0;  // the coalition the constraint compares against
  double value = std::numeric_limits<double>::quiet_NaN();  // NaN when skipped
  bool skipped = false;
  std::string note;  // why skipped, or what forces a zero bound
};

struct RhoBound {
  double raw = std::numeric_limits<double>::infinity();  // +inf when nothing constrains
  double clamped = 1.0;                                  // raw clamped to [0, 1]
  int binding_player = -1;                               // -1 when no constraint
  std::vector<RhoConstraint> constraints;                // one entry per player
};

namespace detail {

inline RhoBound finish_bound(RhoBound bound) {
  bound.raw = std::numeric_limits<double>::infinity();
  bound.binding_player = -1;
  for (const auto& c : bound.constraints) {
    if (c.skipped) continue;
    if (c.value < bound.raw) {
      bound.raw = c.value;
      bound.binding_player = c.player;
    }
  }
  bound.clamped = std::clamp(bound.raw, 0.0, 1.0);
  return bound;
}

}  // namespace detail

// Largest rho for which every player's reward covers their standalone value:
// rho_r = min_i log(v_i / v_N) / log(phi_i / phi*). Players whose constraint
// cannot bind are skipped: phi_i = phi* (their reward is v_N >= v_i) and
// v_i = 0 (rewards are never negative). A player with phi_i = 0 but v_i > 0
// gets reward 0 for every rho > 0, so the bound collapses to 0.
inline RhoBound rho_ir_bound(const Game& game, const ValuationVector& valuation) {
  const int n = game.player_count();
  if (valuation.phi.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("rho_ir_bound: valuation length does not match player count");
  const double phi_star = valuation.max_phi();
  const double grand = game.grand_value();

  RhoBound out;
  for (int i = 0; i < n; ++i) {
    RhoConstraint c;
    c.player = i;
    c.coalition = player_bit(i);
    const double standalone = game.standalone_value(i);
    const double phi = valuation.phi[i];
    if (phi == phi_star) {
      c.skipped = true;
      c.note = "phi at maximum: reward equals v_N >= v_i for every rho";
    } else if (standalone == 0.0) {
      c.skipped = true;
      c.note = "standalone value 0: any non-negative reward satisfies IR";
    } else if (phi == 0.0) {
      c.value = 0.0;
      c.note = "phi = 0 with positive standalone value: IR unattainable for rho > 0";
    } else {
      c.value = std::log(standalone / grand) / std::log(phi / phi_star) + 0.0;  // -0 -> +0
    }
    out.constraints.push_back(std::move(c));
  }
  return detail::finish_bound(std::move(out));
}

// Largest rho keeping the grand coalition stable. For player j, the most
// valuable coalition in which j tops the valuation is C_j = {k : phi_k <=
// phi_j}; defection is unattractive as long as r_j >= v(C_j), which gives
// rho <= log(v_{C_j} / v_N) / log(phi_j / phi*). Top-valued players are
// skipped (their reward is v_N, at least any coalition value), and so are
// players with v_{C_j} = 0 (rewards are never negative).
inline RhoBound rho_stability_bound(const Game& game, const ValuationVector& valuation) {
  const int n = game.player_count();
  if (valuation.phi.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("rho_stability_bound: valuation length does not match player count");
  const double phi_star = valuation.max_phi();
  const double grand = game.grand_value();

  RhoBound out;
  for (int j = 0; j < n; ++j) {
    RhoConstraint c;
    c.player = j;
    const double phi = valuation.phi[j];
    CoalitionMask dominated = 0;
    for (int k = 0; k < n; ++k) {
      if (valuation.phi[k] <= phi) dominated |= player_bit(k);
    }
    c.coalition = dominated;
    const double dominated_value = game.value(dominated);
    if (phi == phi_star) {
      c.skipped = true;
      c.note = "phi at maximum: reward equals v_N, at least any coalition value";
    } else if (dominated_value == 0.0) {
      c.skipped = true;
      c.note = "dominated coalition has value 0: any non-negative reward suffices";
    } else if (phi == 0.0) {
      c.value = 0.0;
      c.note = "phi = 0 but the dominated coalition has positive value: "
               "stability unattainable for rho > 0";
    } else {
      c.value = std::log(dominated_value / grand) / std::log(phi / phi_star) + 0.0;  // -0 -> +0
    }
    out.constraints.push_back(std::move(c));
  }
  return detail::finish_bound(std::move(out));
}

struct IrViolation {
  int player = -1;
  double reward = 0.0;
  double standalone_value = 0.0;
};

struct IrCheckResult {
  bool pass = true;
  std::vector<IrViolation> violations;
};

// Individual rationality over the grand coalition: r_i >= v_i for every
// player, within kCheckTol.
inline IrCheckResult check_ir(const Game& game, const RewardAllocation& allocation) {
  if (allocation.coalition != game.grand_coalition())
    throw std::invalid_argument("check_ir: allocation must cover the grand coalition");
  IrCheckResult out;
  for (std::size_t k = 0; k < allocation.players.size(); ++k) {
    const int i = allocation.players[k];
    const double standalone = game.standalone_value(i);
    if (allocation.rewards[k] < standalone - kCheckTol) {
      out.violations.push_back({i, allocation.rewards[k], standalone});
    }
  }
  out.pass = out.violations.empty();
  return out;
}

struct StabilityViolation {
  CoalitionMask coalition = 0;
  int player = -1;
  double coalition_value = 0.0;
  double reward = 0.0;
};

struct StabilityCheckResult {
  bool pass = true;
  std::vector<StabilityViolation> violations;  // ascending coalition, then player
};

// Exhaustive grand-coalition stability scan: for every nonempty C (the grand
// coalition included, where the condition is tight) and every member i
// attaining max phi within C, the grand-coalition reward r_i must be at
// least v(C). The scan re-verifies from scratch; rho_stability_bound is only
// the prediction.
inline StabilityCheckResult check_stability(const Game& game, const ValuationVector& valuation,
                                            double rho) {
  const int n = game.player_count();
  if (n > kMaxPlayersStabilityScan)
    throw std::invalid_argument("check_stability: exhaustive scan refused for n > 20");
  if (valuation.phi.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("check_stability: valuation length does not match player count");
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("check_stability: rho must be in [0, 1]");

  const double phi_star = valuation.max_phi();
  const double grand = game.grand_value();
  StabilityCheckResult out;
  for (CoalitionMask c = 1; c <= game.grand_coalition(); ++c) {
    double top = 0.0;
    bool first = true;
    for (int i = 0; i < n; ++i) {
      if (!contains(c, i)) continue;
      if (first || valuation.phi[i] > top) top = valuation.phi[i];
      first = false;
    }
    const double coalition_value = game.value(c);
    for (int i = 0; i < n; ++i) {
      if (!contains(c, i) || valuation.phi[i] != top) continue;
      const double reward = reward_factor(valuation.phi[i], phi_star, rho) * grand;
      if (reward < coalition_value - kCheckTol) {
        out.violations.push_back({c, i, coalition_value, reward});
      }
    }
  }
  out.pass = out.violations.empty();
  return out;
}

}  // namespace coopshap
