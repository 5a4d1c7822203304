#pragma once

// Monotone characteristic-function games over small player sets.
//
// A coalition is an n-bit mask: bit k set means player k is in the
// coalition. Players are 0-indexed internally; all human-facing output
// uses 1-indexed labels.

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace coopshap {

using CoalitionMask = std::uint32_t;

// Dense value tables hold 2^n doubles, which caps the player count.
inline constexpr int kMaxPlayersDense = 24;
inline constexpr int kMaxPlayersGenerator = 12;
inline constexpr int kMaxPlayersOracle = 10;
inline constexpr int kMaxPlayersStabilityScan = 20;

inline constexpr CoalitionMask player_bit(int player) {
  return CoalitionMask{1} << player;
}

inline constexpr CoalitionMask full_mask(int n) {
  return (CoalitionMask{1} << n) - 1u;
}

inline int coalition_size(CoalitionMask c) { return std::popcount(c); }

inline bool contains(CoalitionMask c, int player) {
  return (c >> player) & 1u;
}

inline std::vector<int> coalition_members(CoalitionMask c) {
  std::vector<int> out;
  for (int i = 0; c != 0; ++i, c >>= 1) {
    if (c & 1u) out.push_back(i);
  }
  return out;
}

// "{1,3,4}" with 1-indexed player labels; "{}" for the empty coalition.
inline std::string coalition_label(CoalitionMask c) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int i : coalition_members(c)) {
    if (!first) os << ',';
    os << (i + 1);
    first = false;
  }
  os << '}';
  return os.str();
}

struct MonotonicityViolation {
  CoalitionMask subset = 0;    // superset minus one player
  CoalitionMask superset = 0;
  double subset_value = 0.0;
  double superset_value = 0.0;
};

// Checks every single-player extension (sufficient by transitivity).
// Violations come out in deterministic order: ascending superset mask,
// then ascending added-player index. Comparison is exact, no epsilon.
inline std::vector<MonotonicityViolation> check_monotone(
    int player_count, const std::vector<double>& values) {
  if (player_count < 1 || player_count > kMaxPlayersDense)
    throw std::invalid_argument("check_monotone: player count out of range");
  const std::size_t want = std::size_t{1} << player_count;
  if (values.size() != want)
    throw std::invalid_argument("check_monotone: value table must have 2^n entries");

  std::vector<MonotonicityViolation> out;
  for (CoalitionMask sup = 1; sup < want; ++sup) {
    for (int i = 0; i < player_count; ++i) {
      if (!contains(sup, i)) continue;
      const CoalitionMask sub = sup & ~player_bit(i);
      if (values[sub] > values[sup]) {
        out.push_back({sub, sup, values[sub], values[sup]});
      }
    }
  }
  return out;
}

// Immutable after construction; safe for unrestricted concurrent reads.
class Game {
 public:
  Game(int player_count, std::vector<double> values)
      : n_(player_count), values_(std::move(values)) {
    if (n_ < 1 || n_ > kMaxPlayersDense)
      throw std::invalid_argument("Game: player count must be in [1, 24]");
    const std::size_t want = std::size_t{1} << n_;
    if (values_.size() != want)
      throw std::invalid_argument("Game: value table must have exactly 2^n entries, got " +
                                  std::to_string(values_.size()));
    if (values_[0] != 0.0)
      throw std::invalid_argument("Game: the empty coalition must have value 0");
    for (std::size_t m = 0; m < want; ++m) {
      if (!std::isfinite(values_[m]) || values_[m] < 0.0)
        throw std::invalid_argument("Game: negative or non-finite value at coalition " +
                                    coalition_label(static_cast<CoalitionMask>(m)));
    }
    const auto violations = check_monotone(n_, values_);
    if (!violations.empty()) {
      const auto& v = violations.front();
      std::ostringstream os;
      os << "Game: not monotone: v" << coalition_label(v.subset) << " = " << v.subset_value
         << " > v" << coalition_label(v.superset) << " = " << v.superset_value;
      throw std::invalid_argument(os.str());
    }
  }

  int player_count() const { return n_; }

  CoalitionMask grand_coalition() const { return full_mask(n_); }

  double value(CoalitionMask c) const {
    if (c >= (CoalitionMask{1} << n_))
      throw std::out_of_range("Game::value: coalition mask out of range");
    return values_[c];
  }

  double standalone_value(int player) const { return value(player_bit(player)); }

  double grand_value() const { return values_.back(); }

  const std::vector<double>& values() const { return values_; }

  bool operator==(const Game& other) const = default;

 private:
  int n_;
  std::vector<double> values_;
};

namespace detail {

// Uniform double in [0, 1) from the top 53 bits of the engine output.
// std::uniform_real_distribution is implementation-defined, which would
// break the (n, seed) -> Game determinism contract across platforms.
inline double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, bound) via rejection sampling.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = bound * (~std::uint64_t{0} / bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

// Masks 1..2^n-1 ordered by ascending population count, then ascending value.
inline std::vector<CoalitionMask> masks_by_size(int n) {
  std::vector<CoalitionMask> order;
  order.reserve((std::size_t{1} << n) - 1);
  for (int size = 1; size <= n; ++size) {
    for (CoalitionMask m = 1; m < (CoalitionMask{1} << n); ++m) {
      if (coalition_size(m) == size) order.push_back(m);
    }
  }
  return order;
}

}  // namespace detail

// The 7-player demo game with v(C) = sqrt(sum of 1-indexed member labels).
inline Game sqrt_demo_game() {
  constexpr int n = 7;
  std::vector<double> values(std::size_t{1} << n, 0.0);
  for (CoalitionMask m = 1; m < (CoalitionMask{1} << n); ++m) {
    int sum = 0;
    for (int i : coalition_members(m)) sum += i + 1;
    values[m] = std::sqrt(static_cast<double>(sum));
  }
  return Game(n, std::move(values));
}

// Strictly monotone (with probability 1) random game, a pure function of
// (n, seed). Each coalition's value is the max over its one-player
// reductions plus a U[0,1) increment, filled in ascending coalition size.
inline Game random_monotone_game(int n, std::uint64_t seed) {
  if (n < 1 || n > kMaxPlayersGenerator)
    throw std::invalid_argument("random_monotone_game: n must be in [1, 12]");
  std::mt19937_64 rng(seed);
  std::vector<double> values(std::size_t{1} << n, 0.0);
  for (CoalitionMask m : detail::masks_by_size(n)) {
    double base = 0.0;
    for (int i : coalition_members(m)) {
      base = std::max(base, values[m & ~player_bit(i)]);
    }
    values[m] = base + detail::unit_double(rng);
  }
  return Game(n, std::move(values));
}

// Projects the game onto N \ {player}; players above the removed index
// shift down by one bit.
inline Game remove_player(const Game& game, int player) {
  const int n = game.player_count();
  if (player < 0 || player >= n)
    throw std::invalid_argument("remove_player: player index out of range");
  if (n == 1) throw std::invalid_argument("remove_player: cannot empty the game");
  const CoalitionMask low = player_bit(player) - 1u;
  std::vector<double> values(std::size_t{1} << (n - 1), 0.0);
  for (CoalitionMask m = 0; m < (CoalitionMask{1} << (n - 1)); ++m) {
    const CoalitionMask expanded = ((m & ~low) << 1) | (m & low);
    values[m] = game.value(expanded);
  }
  return Game(n - 1, std::move(values));
}

}  // namespace coopshap
