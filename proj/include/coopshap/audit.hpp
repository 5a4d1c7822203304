#pragma once

// Executable fairness and incentive checks.
//
// Detectors find the structures the axioms quantify over (null players,
// symmetric pairs, dominance pairs, improved-game pairs); checkers verify the
// promised conclusion against the actual valuations and rewards and hand back
// numeric witnesses for every failure. full_audit orchestrates all of them
// into one deterministic report.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coopshap/game.hpp"
#include "coopshap/rewards.hpp"
#include "coopshap/valuation.hpp"

namespace coopshap {

inline constexpr double kDetectorTol = 1e-12;

// Players whose inclusion changes no nonempty coalition's value:
// |v(C u {i}) - v(C)| <= tol for every nonempty C avoiding i. The empty
// coalition is deliberately not quantified; a detected player may still have
// a positive standalone value (callers should flag that case, it clashes
// with individual rationality for any rho > 0).
inline std::vector<int> find_useless_players(const Game& game, double tol = kDetectorTol) {
  if (tol < 0.0) throw std::invalid_argument("find_useless_players: tol must be >= 0");
  const int n = game.player_count();
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    bool null_player = true;
    for (CoalitionMask c = 1; c <= game.grand_coalition() && null_player; ++c) {
      if (contains(c, i)) continue;
      if (std::abs(game.value(c | player_bit(i)) - game.value(c)) > tol) null_player = false;
    }
    if (null_player) out.push_back(i);
  }
  return out;
}

// Unordered pairs contributing identically to every coalition:
// |v(C u {i}) - v(C u {j})| <= tol for every C avoiding both, the empty
// coalition included.
inline std::vector<std::pair<int, int>> find_symmetric_pairs(const Game& game,
                                                             double tol = kDetectorTol) {
  if (tol < 0.0) throw std::invalid_argument("find_symmetric_pairs: tol must be >= 0");
  const int n = game.player_count();
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      bool symmetric = true;
      for (CoalitionMask c = 0; c <= game.grand_coalition() && symmetric; ++c) {
        if (contains(c, i) || contains(c, j)) continue;
        if (std::abs(game.value(c | player_bit(i)) - game.value(c | player_bit(j))) > tol)
          symmetric = false;
      }
      if (symmetric) out.emplace_back(i, j);
    }
  }
  return out;
}

enum class Dominance { i_dominates, j_dominates, symmetric, incomparable };

inline const char* dominance_name(Dominance d) {
  switch (d) {
    case Dominance::i_dominates: return "i_dominates";
    case Dominance::j_dominates: return "j_dominates";
    case Dominance::symmetric: return "symmetric";
    default: return "incomparable";
  }
}

struct DesirabilityResult {
  Dominance relation = Dominance::incomparable;
  CoalitionMask witness = 0;  // nonempty B with a strict gap, when one exists
};

// Strict-desirability classification. i dominates j when v(C u {i}) >=
// v(C u {j}) - tol for every C avoiding both (the empty coalition included)
// and some NONEMPTY B shows a strict gap; the empty coalition alone is never
// a witness. "symmetric" means the two players are interchangeable on every
// nonempty coalition, whatever the standalone values do.
inline DesirabilityResult check_desirability(const Game& game, int i, int j,
                                             double tol = kDetectorTol) {
  if (i == j) throw std::invalid_argument("check_desirability: players must differ");
  bool weak_ij = true, weak_ji = true;          // over all C, empty included
  bool nonempty_equal = true;                   // over nonempty C only
  CoalitionMask witness_ij = 0, witness_ji = 0; // nonempty strict gaps

  for (CoalitionMask c = 0; c <= game.grand_coalition(); ++c) {
    if (contains(c, i) || contains(c, j)) continue;
    const double with_i = game.value(c | player_bit(i));
    const double with_j = game.value(c | player_bit(j));
    if (with_i < with_j - tol) weak_ij = false;
    if (with_j < with_i - tol) weak_ji = false;
    if (c != 0) {
      if (std::abs(with_i - with_j) > tol) nonempty_equal = false;
      if (with_i > with_j + tol && witness_ij == 0) witness_ij = c;
      if (with_j > with_i + tol && witness_ji == 0) witness_ji = c;
    }
  }

  if (weak_ij && witness_ij != 0) return {Dominance::i_dominates, witness_ij};
  if (weak_ji && witness_ji != 0) return {Dominance::j_dominates, witness_ji};
  if (nonempty_equal) return {Dominance::symmetric, 0};
  return {Dominance::incomparable, 0};
}

struct GamePair {
  Game base;
  Game modified;
  int focal_player = -1;
};

// Builds a pair of games differing only on coalitions containing the focal
// player: a seeded random selection of those coalitions is raised by random
// positive amounts, then values are repaired upward in ascending coalition
// size so the result stays monotone. Coalitions avoiding the focal player
// can never need repair (their values are untouched and only upper
// neighbours grew), so the construction always succeeds.
inline GamePair make_monotonicity_pair(const Game& game, int focal_player, std::uint64_t seed) {
  const int n = game.player_count();
  if (focal_player < 0 || focal_player >= n)
    throw std::invalid_argument("make_monotonicity_pair: focal player out of range");

  std::mt19937_64 rng(seed);
  std::vector<double> values = game.values();
  bool bumped = false;
  for (CoalitionMask m = 1; m <= game.grand_coalition(); ++m) {
    if (!contains(m, focal_player)) continue;
    if (detail::unit_double(rng) < 0.5) {
      values[m] += 1.0 - detail::unit_double(rng);  // in (0, 1]
      bumped = true;
    }
  }
  if (!bumped) {
    values[player_bit(focal_player)] += 1.0 - detail::unit_double(rng);
  }
  for (CoalitionMask m : detail::masks_by_size(n)) {
    if (!contains(m, focal_player)) continue;
    for (int j : coalition_members(m)) {
      if (j != focal_player) values[m] = std::max(values[m], values[m & ~player_bit(j)]);
    }
  }
  return {game, Game(n, std::move(values)), focal_player};
}

enum class CheckStatus { pass, fail, vacuous };

inline const char* check_status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    default: return "vacuous";
  }
}

struct F4Result {
  CheckStatus status = CheckStatus::vacuous;
  double reward_base = 0.0;          // r_i under the base game
  double reward_modified = 0.0;      // r_i under the modified game
  double modified_grand_value = 0.0; // the premise compares this against r_i
};

// Strict monotonicity: if only coalitions containing the focal player
// improved and the modified grand value exceeds the player's old reward,
// the player's reward must strictly grow. Vacuous when the premise fails.
inline F4Result check_f4(const GamePair& pair, Scheme scheme, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("check_f4: rho must be in [0, 1]");
  if (pair.base.player_count() != pair.modified.player_count())
    throw std::invalid_argument("check_f4: malformed pair");
  const int i = pair.focal_player;

  const auto base_val = shapley_exact(pair.base, scheme);
  const auto mod_val = shapley_exact(pair.modified, scheme);
  const auto base_alloc = allocate(pair.base, base_val, pair.base.grand_coalition(), rho);
  const auto mod_alloc = allocate(pair.modified, mod_val, pair.modified.grand_coalition(), rho);

  F4Result out;
  out.reward_base = base_alloc.reward_for(i);
  out.reward_modified = mod_alloc.reward_for(i);
  out.modified_grand_value = pair.modified.grand_value();
  if (!(out.modified_grand_value > out.reward_base)) {
    out.status = CheckStatus::vacuous;
  } else {
    out.status = out.reward_modified > out.reward_base - kCheckTol ? CheckStatus::pass
                                                                   : CheckStatus::fail;
  }
  return out;
}

struct PartyMonotonicityResult {
  bool pass = true;
  int worst_player = -1;   // the non-focal player with the largest gain excess
  double focal_gain = 0.0;
  double worst_gain = 0.0;
};

// Probe of the proof-internal lemma: when only focal-containing coalitions
// improve, does the focal player's valuation gain dominate everyone else's?
// (Known to fail for the ratio scheme on hand-constructed pairs; results are
// recorded, never assumed.)
inline PartyMonotonicityResult check_party_monotonicity(const GamePair& pair, Scheme scheme) {
  const int i = pair.focal_player;
  const auto base_val = shapley_exact(pair.base, scheme);
  const auto mod_val = shapley_exact(pair.modified, scheme);

  PartyMonotonicityResult out;
  out.focal_gain = mod_val.phi[i] - base_val.phi[i];
  out.worst_gain = out.focal_gain;
  for (int j = 0; j < pair.base.player_count(); ++j) {
    if (j == i) continue;
    const double gain = mod_val.phi[j] - base_val.phi[j];
    if (gain > out.worst_gain) {
      out.worst_gain = gain;
      out.worst_player = j;
    }
  }
  out.pass = out.worst_gain <= out.focal_gain + kCheckTol;
  return out;
}

struct AuditWitness {
  std::string description;
  std::vector<std::pair<std::string, double>> quantities;  // ordered name/value pairs
};

struct AuditEntry {
  std::string axiom;
  CheckStatus status = CheckStatus::pass;
  std::vector<AuditWitness> witnesses;
  std::string notes;
  bool gating = true;  // informational probes never affect the exit status
};

struct AuditReport {
  std::vector<AuditEntry> entries;

  bool all_asserted_pass() const {
    for (const auto& e : entries) {
      if (e.gating && e.status == CheckStatus::fail) return false;
    }
    return true;
  }
  const AuditEntry* find(const std::string& axiom) const {
    for (const auto& e : entries) {
      if (e.axiom == axiom) return &e;
    }
    return nullptr;
  }
};

struct AuditOptions {
  std::uint64_t seed = 0;
  int pair_count = 32;       // F4 / party-monotonicity pairs to generate
  double tol = kDetectorTol; // detector tolerance
};

namespace detail {

inline AuditWitness player_witness(std::string description, int player,
                                   std::initializer_list<std::pair<const char*, double>> qs) {
  AuditWitness w;
  w.description = std::move(description);
  w.quantities.emplace_back("player", static_cast<double>(player + 1));
  for (const auto& [name, value] : qs) w.quantities.emplace_back(name, value);
  return w;
}

}  // namespace detail

// Runs every checker against one game at one (scheme, rho) and returns a
// deterministic report: R1-R3 on the produced allocation, R4/R6 at the given
// rho plus the bound predictions, F1-F3 detector conclusions verified on the
// actual rewards, and a generated-pair batch for F4 and the party-
// monotonicity probe. F4 and the probe are recorded, not gating: the strict-
// monotonicity conclusion is falsified by concrete ratio-scheme pairs, so it
// is reported as evidence rather than asserted.
inline AuditReport full_audit(const Game& game, Scheme scheme, double rho,
                              const AuditOptions& options = {}) {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("full_audit: rho must be in [0, 1]");
  const int n = game.player_count();
  const auto valuation = shapley_exact(game, scheme);
  const auto allocation = allocate(game, valuation, game.grand_coalition(), rho);
  const double grand = game.grand_value();

  AuditReport report;

  {  // R1: non-negative rewards
    AuditEntry e{"R1", CheckStatus::pass, {}, "", true};
    for (std::size_t k = 0; k < allocation.players.size(); ++k) {
      if (allocation.rewards[k] < 0.0) {
        e.status = CheckStatus::fail;
        e.witnesses.push_back(detail::player_witness(
            "negative reward", allocation.players[k], {{"reward", allocation.rewards[k]}}));
      }
    }
    report.entries.push_back(std::move(e));
  }

  {  // R2: no reward above the coalition value
    AuditEntry e{"R2", CheckStatus::pass, {}, "", true};
    for (std::size_t k = 0; k < allocation.players.size(); ++k) {
      if (allocation.rewards[k] > grand + kCheckTol) {
        e.status = CheckStatus::fail;
        e.witnesses.push_back(detail::player_witness(
            "reward exceeds coalition value", allocation.players[k],
            {{"reward", allocation.rewards[k]}, {"coalition_value", grand}}));
      }
    }
    report.entries.push_back(std::move(e));
  }

  {  // R3: some member receives the full coalition value
    AuditEntry e{"R3", CheckStatus::pass, {}, "", true};
    if (std::abs(allocation.max_reward() - grand) > kCheckTol) {
      e.status = CheckStatus::fail;
      AuditWitness w;
      w.description = "no member receives the full coalition value";
      w.quantities.emplace_back("max_reward", allocation.max_reward());
      w.quantities.emplace_back("coalition_value", grand);
      e.witnesses.push_back(std::move(w));
    }
    report.entries.push_back(std::move(e));
  }

  {  // R4: individual rationality at the audited rho
    AuditEntry e{"R4", CheckStatus::pass, {}, "", true};
    const auto ir = check_ir(game, allocation);
    for (const auto& v : ir.violations) {
      e.witnesses.push_back(detail::player_witness(
          "reward below standalone value", v.player,
          {{"reward", v.reward}, {"standalone_value", v.standalone_value}}));
    }
    if (!ir.pass) e.status = CheckStatus::fail;
    const auto bound = rho_ir_bound(game, valuation);
    std::ostringstream note;
    note << "rho = " << rho << ", rho_r raw = " << bound.raw << ", clamped = " << bound.clamped;
    if (bound.binding_player >= 0) note << ", binding player " << bound.binding_player + 1;
    e.notes = note.str();
    report.entries.push_back(std::move(e));
  }

  {  // R6: grand-coalition stability at the audited rho
    AuditEntry e{"R6", CheckStatus::pass, {}, "", true};
    const auto stab = check_stability(game, valuation, rho);
    for (const auto& v : stab.violations) {
      AuditWitness w = detail::player_witness(
          "top member of " + coalition_label(v.coalition) + " rewarded below the coalition value",
          v.player, {{"reward", v.reward}, {"coalition_value", v.coalition_value}});
      e.witnesses.push_back(std::move(w));
    }
    if (!stab.pass) e.status = CheckStatus::fail;
    const auto bound = rho_stability_bound(game, valuation);
    std::ostringstream note;
    note << "rho = " << rho << ", rho_s raw = " << bound.raw << ", clamped = " << bound.clamped;
    if (bound.binding_player >= 0) note << ", binding player " << bound.binding_player + 1;
    e.notes = note.str();
    report.entries.push_back(std::move(e));
  }

  {  // rho_s consistency: the exhaustive checker must agree with the bound
    AuditEntry e{"rho_s_agreement", CheckStatus::pass, {}, "", true};
    const auto bound = rho_stability_bound(game, valuation);
    const double probe = bound.clamped * (1.0 - 1e-9);
    const auto stab = check_stability(game, valuation, probe);
    if (!stab.pass) {
      e.status = CheckStatus::fail;
      for (const auto& v : stab.violations) {
        e.witnesses.push_back(detail::player_witness(
            "stability violated just below the predicted bound for " + coalition_label(v.coalition),
            v.player, {{"rho", probe}, {"reward", v.reward}, {"coalition_value", v.coalition_value}}));
      }
      e.notes = "bound and exhaustive checker disagree; the checker is authoritative";
    } else {
      std::ostringstream note;
      note << "checker confirms stability at rho = " << probe;
      e.notes = note.str();
    }
    report.entries.push_back(std::move(e));
  }

  {  // F1: null players get zero valuation and (for rho > 0) zero reward
    AuditEntry e{"F1", CheckStatus::pass, {}, "", true};
    const auto nulls = find_useless_players(game, options.tol);
    if (nulls.empty()) {
      e.status = CheckStatus::vacuous;
      e.notes = "no null player detected";
    }
    for (int u : nulls) {
      const double phi = valuation.phi[u];
      const double reward = allocation.reward_for(u);
      const bool phi_zero = std::abs(phi) <= kCheckTol;
      const bool reward_zero = rho > 0.0 ? std::abs(reward) <= kCheckTol
                                         : true;  // rho = 0 pays v_N to everyone by design
      if (!phi_zero || !reward_zero) {
        e.status = CheckStatus::fail;
        e.witnesses.push_back(detail::player_witness(
            "null player with nonzero valuation or reward", u,
            {{"phi", phi}, {"reward", reward}, {"rho", rho}}));
      }
      if (game.standalone_value(u) > options.tol) {
        e.notes += (e.notes.empty() ? "" : "; ");
        e.notes += "player " + std::to_string(u + 1) +
                   " is null on nonempty coalitions but has positive standalone value; "
                   "a zero reward conflicts with individual rationality for any rho > 0";
      } else if (n > 1) {
        // Removing a fully-null player must leave everyone else's reward alone.
        const Game reduced = remove_player(game, u);
        const auto reduced_val = shapley_exact(reduced, scheme);
        const auto reduced_alloc =
            allocate(reduced, reduced_val, reduced.grand_coalition(), rho);
        for (int j = 0; j < n; ++j) {
          if (j == u) continue;
          const int reduced_index = j < u ? j : j - 1;
          const double before = allocation.reward_for(j);
          const double after = reduced_alloc.reward_for(reduced_index);
          if (std::abs(before - after) > kCheckTol) {
            e.status = CheckStatus::fail;
            e.witnesses.push_back(detail::player_witness(
                "reward changed after removing null player " + std::to_string(u + 1), j,
                {{"reward_with", before}, {"reward_without", after}}));
          }
        }
      }
    }
    report.entries.push_back(std::move(e));
  }

  {  // F2: symmetric players get equal valuations and rewards
    AuditEntry e{"F2", CheckStatus::pass, {}, "", true};
    const auto pairs = find_symmetric_pairs(game, options.tol);
    if (pairs.empty()) {
      e.status = CheckStatus::vacuous;
      e.notes = "no symmetric pair detected";
    }
    for (const auto& [i, j] : pairs) {
      const double phi_gap = std::abs(valuation.phi[i] - valuation.phi[j]);
      const double reward_gap = std::abs(allocation.reward_for(i) - allocation.reward_for(j));
      if (phi_gap > kCheckTol || reward_gap > kCheckTol) {
        e.status = CheckStatus::fail;
        AuditWitness w;
        w.description = "symmetric pair with unequal treatment";
        w.quantities.emplace_back("player_i", i + 1);
        w.quantities.emplace_back("player_j", j + 1);
        w.quantities.emplace_back("phi_gap", phi_gap);
        w.quantities.emplace_back("reward_gap", reward_gap);
        e.witnesses.push_back(std::move(w));
      }
    }
    report.entries.push_back(std::move(e));
  }

  {  // F3: strictly more desirable players get strictly larger phi and reward
    AuditEntry e{"F3", CheckStatus::pass, {}, "", true};
    bool any = false;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        auto res = check_desirability(game, i, j, options.tol);
        int hi = i, lo = j;
        if (res.relation == Dominance::j_dominates) std::swap(hi, lo);
        else if (res.relation != Dominance::i_dominates) continue;
        any = true;
        const bool phi_ordered = valuation.phi[hi] > valuation.phi[lo];
        const bool reward_ordered =
            rho > 0.0 ? allocation.reward_for(hi) > allocation.reward_for(lo)
                      : true;  // rho = 0 pays v_N to everyone by design
        if (!phi_ordered || !reward_ordered) {
          e.status = CheckStatus::fail;
          AuditWitness w;
          w.description = "dominance without strictly ordered outcome";
          w.quantities.emplace_back("dominant_player", hi + 1);
          w.quantities.emplace_back("dominated_player", lo + 1);
          w.quantities.emplace_back("phi_dominant", valuation.phi[hi]);
          w.quantities.emplace_back("phi_dominated", valuation.phi[lo]);
          w.quantities.emplace_back("reward_dominant", allocation.reward_for(hi));
          w.quantities.emplace_back("reward_dominated", allocation.reward_for(lo));
          w.quantities.emplace_back("witness_coalition", res.witness);
          e.witnesses.push_back(std::move(w));
        }
      }
    }
    if (!any) {
      e.status = CheckStatus::vacuous;
      e.notes = "no dominance pair detected";
    }
    report.entries.push_back(std::move(e));
  }

  {  // F4 batch + party-monotonicity probe over generated pairs
    AuditEntry f4{"F4", CheckStatus::pass, {}, "", false};
    AuditEntry pm{"party_monotonicity", CheckStatus::pass, {}, "", false};
    std::mt19937_64 seeder(options.seed);
    int f4_pass = 0, f4_fail = 0, f4_vacuous = 0, pm_pass = 0, pm_fail = 0;
    for (int k = 0; k < options.pair_count; ++k) {
      const int focal = static_cast<int>(detail::uniform_below(seeder, n));
      const auto pair = make_monotonicity_pair(game, focal, seeder());
      const auto f4_res = check_f4(pair, scheme, rho);
      switch (f4_res.status) {
        case CheckStatus::pass: ++f4_pass; break;
        case CheckStatus::vacuous: ++f4_vacuous; break;
        case CheckStatus::fail:
          ++f4_fail;
          f4.witnesses.push_back(detail::player_witness(
              "reward dropped although only focal coalitions improved", focal,
              {{"pair_index", static_cast<double>(k)},
               {"reward_base", f4_res.reward_base},
               {"reward_modified", f4_res.reward_modified},
               {"modified_grand_value", f4_res.modified_grand_value},
               {"rho", rho}}));
          break;
      }
      const auto pm_res = check_party_monotonicity(pair, scheme);
      if (pm_res.pass) {
        ++pm_pass;
      } else {
        ++pm_fail;
        if (pm.witnesses.size() < 8) {
          pm.witnesses.push_back(detail::player_witness(
              "another player's valuation gain exceeds the focal player's", focal,
              {{"pair_index", static_cast<double>(k)},
               {"focal_gain", pm_res.focal_gain},
               {"other_player", static_cast<double>(pm_res.worst_player + 1)},
               {"other_gain", pm_res.worst_gain}}));
        }
      }
    }
    if (f4_fail > 0) f4.status = CheckStatus::fail;
    else if (f4_pass == 0) f4.status = CheckStatus::vacuous;
    {
      std::ostringstream note;
      note << f4_pass << " pass, " << f4_fail << " fail, " << f4_vacuous
           << " vacuous over " << options.pair_count
           << " generated pairs; recorded as evidence, not asserted (the strict-monotonicity "
              "conclusion has concrete ratio-scheme counterexamples)";
      f4.notes = note.str();
    }
    if (pm_fail > 0) pm.status = CheckStatus::fail;
    {
      std::ostringstream note;
      note << pm_pass << " pass, " << pm_fail << " fail over " << options.pair_count
           << " generated pairs; informational probe of the proof-internal lemma";
      pm.notes = note.str();
    }
    report.entries.push_back(std::move(f4));
    report.entries.push_back(std::move(pm));
  }

  {  // informational: do the two schemes crown the same top player?
    AuditEntry e{"argmax_coincidence", CheckStatus::pass, {}, "", false};
    const auto additive = shapley_exact(game, Scheme::additive);
    const auto ratio = shapley_exact(game, Scheme::ratio);
    const auto top_add = static_cast<int>(std::max_element(additive.phi.begin(), additive.phi.end()) -
                                          additive.phi.begin());
    const auto top_rel = static_cast<int>(std::max_element(ratio.phi.begin(), ratio.phi.end()) -
                                          ratio.phi.begin());
    std::ostringstream note;
    if (top_add == top_rel) {
      note << "both schemes rank player " << top_add + 1 << " highest";
    } else {
      note << "schemes disagree: additive ranks player " << top_add + 1
           << " highest, ratio ranks player " << top_rel + 1
           << " highest; informational finding, not a failure";
      AuditWitness w;
      w.description = "argmax divergence between schemes";
      w.quantities.emplace_back("additive_top_player", top_add + 1);
      w.quantities.emplace_back("ratio_top_player", top_rel + 1);
      e.witnesses.push_back(std::move(w));
    }
    e.notes = note.str();
    report.entries.push_back(std::move(e));
  }

  return report;
}

}  // namespace coopshap
