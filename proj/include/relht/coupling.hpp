#pragma once

// The three s-tuple sample distributions (sphere / ball / no-instance), the
// 3s-point coupled sampler relating the latter two, and discriminator-based
// total-variation lower bounds.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "relht/funcspec.hpp"
#include "relht/params.hpp"
#include "relht/point.hpp"
#include "relht/rng.hpp"
#include "relht/stats.hpp"

namespace relht {

struct SampleTuple {
  std::vector<Point> points;

  std::uint32_t s() const { return static_cast<std::uint32_t>(points.size()); }
  std::uint32_t dimension() const {
    return points.empty() ? 0 : points[0].dimension();
  }
};

enum class TupleKind { Sphere, Ball, No };

// (a) s uniform sphere points, (b) s uniform ball points, (c) s draws of the
// no-instance SAMP oracle. Kind No requires a spec whose center matches z.
SampleTuple draw_tuple(TupleKind kind, const Point& z, const Params& params,
                       Rng& rng, const NoSpec* spec = nullptr);
SampleTuple draw_tuple(TupleKind kind, const Point& z, const Params& params,
                       const BallWeightTable& table, Rng& rng,
                       const NoSpec* spec = nullptr);

// One run of the coupled process: 3s uniform ball points x^1..x^{3s} with one
// fresh coin bit each; v_star = first s points whose coin is 1 (nil if fewer
// than s coins came up 1), w_star = first s points with g(x^i) = 1 (nil if
// fewer than s satisfy g).
struct CoupledDraw {
  std::vector<Point> shared_base;  // the 3s base points, in draw order
  std::vector<bool> coins;         // 3s coin bits
  std::vector<bool> g_values;      // g on each base point
  std::optional<SampleTuple> v_star;
  std::optional<SampleTuple> w_star;
};

CoupledDraw coupled_draw(const Point& z, const Params& params,
                         const NoSpec& spec, Rng& rng);

// |signed_dot(zeta, w^i xor z)| for every (point i, hyperplane zeta) pair,
// point-major order. Every point must lie on Sphere_r(z).
std::vector<std::uint64_t> margin_stats(const NoSpec& spec,
                                        const SampleTuple& tuple);

// Coordinatewise majority of the tuple, ties broken toward bit 0.
Point coordinatewise_majority(const SampleTuple& tuple);

// Named scalar statistics of a sample tuple, used by the discriminator.
//   S1: minimum pairwise Hamming distance within the tuple.
//   S2: |Consistent(U)| = #coordinates where all s points agree.
//   S3: #points at distance exactly r from the coordinatewise majority.
enum class TupleStatistic { S1MinPairwiseDistance, S2ConsistentSize, S3SphereCount };

TupleStatistic statistic_from_name(const std::string& name);
std::string statistic_name(TupleStatistic stat);
std::int64_t evaluate_statistic(TupleStatistic stat, const SampleTuple& tuple,
                                std::uint32_t r);

using TupleGenerator = std::function<SampleTuple(Rng&)>;

struct AdvantageResult {
  double advantage = 0.0;        // max over thresholds of |P_A - P_B|
  std::int64_t best_threshold = 0;  // stat >= threshold realizing the max
  WilsonInterval ci_a;           // Wilson CI of P_A[stat >= best_threshold]
  WilsonInterval ci_b;           // Wilson CI of P_B[stat >= best_threshold]
  std::vector<std::int64_t> values_a;
  std::vector<std::int64_t> values_b;
};

// Best-threshold advantage between two pre-collected value samples of equal
// size; the core of discriminator_advantage.
AdvantageResult advantage_from_values(std::vector<std::int64_t> values_a,
                                      std::vector<std::int64_t> values_b);

// Empirical advantage of the best threshold test on `stat` between the two
// generators; a lower bound on their total-variation distance. Trials are
// taken per side; thresholds are maximized over the pooled sample values.
AdvantageResult discriminator_advantage(TupleStatistic stat, std::uint32_t r,
                                        const TupleGenerator& gen_a,
                                        const TupleGenerator& gen_b,
                                        std::uint64_t trials, Rng& rng);

}  // namespace relht
