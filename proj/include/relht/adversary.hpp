#pragma once

// Column-pattern partitions of [n] induced by a sample tuple, goodness /
// typicality checks on (z, U), the conditional-center sampler, and the
// query-point attack strategies with their hit-rate experiment.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relht/coupling.hpp"
#include "relht/params.hpp"
#include "relht/point.hpp"
#include "relht/rng.hpp"
#include "relht/stats.hpp"

namespace relht {

// Coordinates grouped by column pattern: coordinate j belongs to class c
// where bit i of c is u^{i+1}_j. Only nonempty classes are stored; class
// sizes always sum to n.
struct ColPartition {
  std::uint32_t s = 0;
  std::uint32_t n = 0;
  std::map<std::uint64_t, std::vector<std::uint32_t>> classes;

  const std::vector<std::uint32_t>& of(std::uint64_t c) const {
    static const std::vector<std::uint32_t> kEmpty;
    auto it = classes.find(c);
    return it == classes.end() ? kEmpty : it->second;
  }
};

ColPartition col_partition(const SampleTuple& u);

// Coordinates where all s points agree: col_{0^s} union col_{1^s}.
std::vector<std::uint32_t> consistent_set(const SampleTuple& u);

// Per-pattern goodness of (z, U): on each col_c, the number of coordinates
// with z_j = 0 must lie within +-n^sigma of (n/2) delta^{|c|} (1-delta)^{s-|c|}
// and the number with z_j = 1 within +-n^sigma of the complementary
// expectation (n/2) delta^{s-|c|} (1-delta)^{|c|}.
struct PatternReport {
  std::uint64_t pattern = 0;
  std::uint32_t size = 0;          // |col_c|
  std::uint32_t zeros = 0;         // #{j in col_c : z_j = 0}
  std::uint32_t ones = 0;          // #{j in col_c : z_j = 1}
  double expected_zeros = 0.0;
  double expected_ones = 0.0;
  bool pass = false;
};

struct GoodnessReport {
  double sigma = 0.0;
  double slack = 0.0;  // n^sigma
  bool pass = false;   // conjunction over all 2^s patterns
  std::vector<PatternReport> patterns;
};

GoodnessReport check_good(const Point& z, const SampleTuple& u,
                          const Params& params, double sigma);

// z uniform over {0,1}^n, then s independent uniform points of Sphere_r(z).
std::pair<Point, SampleTuple> joint_draw(const Params& params, Rng& rng);

struct RejectionExhausted : std::runtime_error {
  explicit RejectionExhausted(std::uint64_t tries)
      : std::runtime_error("rejection sampler exhausted after " +
                           std::to_string(tries) + " tries") {}
};

// Exact draw from the posterior of z given U: propose z' uniform on
// Sphere_r(u^1), accept iff ham(u^i, z') = r for all i >= 2. Acceptance
// decays quickly with s; callers needing posterior averages should use
// joint_draw instead.
Point conditional_center(const SampleTuple& u, const Params& params, Rng& rng,
                         std::uint64_t max_tries);

enum class AttackStrategy { ConsistentFlip, TowardAway, RandomFlip, Clairvoyant };

AttackStrategy strategy_from_name(const std::string& name);
std::string strategy_name(AttackStrategy s);

struct StrategyExhausted : std::runtime_error {
  explicit StrategyExhausted(const std::string& what)
      : std::runtime_error(what) {}
};

// Produce a query point y by flipping exactly t_prime coordinates of u^1:
//   ConsistentFlip: a uniform t_prime-subset of Consistent(U);
//   TowardAway: t_prime/2 from Consistent(U) and t_prime/2 from coordinates
//     where u^1 disagrees with every other sample;
//   RandomFlip: a uniform t_prime-subset of [n];
//   Clairvoyant (diagnostic, sees z): t_prime/2 inside supp(u^1 xor z) and
//     t_prime/2 outside, so ham(y, z) = r exactly.
// Throws StrategyExhausted when a strategy has fewer candidate coordinates
// than it must flip.
Point attack(AttackStrategy strategy, const SampleTuple& u,
             std::uint32_t t_prime, Rng& rng,
             const Point* z_for_clairvoyant = nullptr);

struct AttackResult {
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;           // y on Sphere_r(z) and all ham(y,u^i) >= threshold
  std::uint64_t strategy_failures = 0;  // StrategyExhausted trials, counted as non-hits
  std::uint64_t good_count = 0;     // trials where good(z, U) held (sigma below)
  std::uint64_t hits_with_good = 0; // hit and good(z, U) in the same trial
  WilsonInterval hit_ci;
};

// Averages the hit event over joint_draw, one derived stream per trial index,
// so the result is independent of scheduling. Clairvoyant requires `sanity`.
AttackResult attack_experiment(AttackStrategy strategy, const Params& params,
                               std::uint32_t t_prime,
                               std::uint32_t closeness_threshold,
                               std::uint64_t trials, std::uint64_t master_seed,
                               double sigma = 0.51, bool sanity = false);

}  // namespace relht
