#include "relht/coupling.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <stdexcept>

#include "relht/sampling.hpp"

namespace relht {

SampleTuple draw_tuple(TupleKind kind, const Point& z, const Params& params,
                       const BallWeightTable& table, Rng& rng,
                       const NoSpec* spec) {
  if (z.dimension() != params.n)
    throw std::invalid_argument("draw_tuple: center dimension mismatch");
  if (kind == TupleKind::No) {
    if (spec == nullptr)
      throw std::invalid_argument("draw_tuple: kind=no requires a spec");
    if (spec->z != z)
      throw std::invalid_argument("draw_tuple: spec center mismatch");
  }
  SampleTuple tuple;
  tuple.points.reserve(params.s);
  for (std::uint32_t i = 0; i < params.s; ++i) {
    switch (kind) {
      case TupleKind::Sphere:
        tuple.points.push_back(sample_sphere(z, params.r, rng));
        break;
      case TupleKind::Ball:
        tuple.points.push_back(sample_ball(z, table, rng));
        break;
      case TupleKind::No:
        tuple.points.push_back(samp_no(*spec, table, rng));
        break;
    }
  }
  return tuple;
}

SampleTuple draw_tuple(TupleKind kind, const Point& z, const Params& params,
                       Rng& rng, const NoSpec* spec) {
  BallWeightTable table(params.n, params.r);
  return draw_tuple(kind, z, params, table, rng, spec);
}

CoupledDraw coupled_draw(const Point& z, const Params& params,
                         const NoSpec& spec, Rng& rng) {
  if (spec.z != z)
    throw std::invalid_argument("coupled_draw: spec center mismatch");
  const std::uint32_t count = 3 * params.s;
  BallWeightTable table(params.n, params.r);
  CoupledDraw draw;
  draw.shared_base.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i)
    draw.shared_base.push_back(sample_ball(z, table, rng));
  draw.coins.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) draw.coins.push_back(rng.bit());
  draw.g_values.reserve(count);
  for (const auto& x : draw.shared_base)
    draw.g_values.push_back(eval_no(spec, x));

  auto select = [&](const std::vector<bool>& mask) -> std::optional<SampleTuple> {
    SampleTuple t;
    for (std::uint32_t i = 0; i < count && t.points.size() < params.s; ++i)
      if (mask[i]) t.points.push_back(draw.shared_base[i]);
    if (t.points.size() < params.s) return std::nullopt;
    return t;
  };
  draw.v_star = select(draw.coins);
  draw.w_star = select(draw.g_values);
  return draw;
}

std::vector<std::uint64_t> margin_stats(const NoSpec& spec,
                                        const SampleTuple& tuple) {
  std::vector<std::uint64_t> margins;
  margins.reserve(tuple.points.size() * spec.t());
  for (const auto& p : tuple.points) {
    if (hamming(p, spec.z) != spec.r)
      throw std::invalid_argument("margin_stats: point off the sphere");
    const Point u = xor_points(p, spec.z);
    for (const auto& zeta : spec.zetas)
      margins.push_back(static_cast<std::uint64_t>(std::llabs(signed_dot(zeta, u))));
  }
  return margins;
}

Point coordinatewise_majority(const SampleTuple& tuple) {
  if (tuple.points.empty())
    throw std::invalid_argument("coordinatewise_majority: empty tuple");
  const std::uint32_t n = tuple.dimension();
  const std::uint32_t s = tuple.s();
  Point maj(n);
  for (std::uint32_t j = 0; j < n; ++j) {
    std::uint32_t ones = 0;
    for (const auto& p : tuple.points) {
      if (p.dimension() != n)
        throw std::invalid_argument("coordinatewise_majority: dimension mismatch");
      ones += p.get(j);
    }
    maj.set(j, 2 * ones > s);  // ties (2*ones == s) break toward 0
  }
  return maj;
}

TupleStatistic statistic_from_name(const std::string& name) {
  if (name == "S1") return TupleStatistic::S1MinPairwiseDistance;
  if (name == "S2") return TupleStatistic::S2ConsistentSize;
  if (name == "S3") return TupleStatistic::S3SphereCount;
  throw std::invalid_argument("unknown statistic: " + name);
}

std::string statistic_name(TupleStatistic stat) {
  switch (stat) {
    case TupleStatistic::S1MinPairwiseDistance: return "S1";
    case TupleStatistic::S2ConsistentSize: return "S2";
    case TupleStatistic::S3SphereCount: return "S3";
  }
  throw std::logic_error("unreachable");
}

namespace {

std::int64_t consistent_size(const SampleTuple& tuple) {
  const std::uint32_t n = tuple.dimension();
  const std::size_t words = tuple.points[0].words().size();
  std::int64_t agree = 0;
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t all_and = ~std::uint64_t{0}, any_or = 0;
    for (const auto& p : tuple.points) {
      all_and &= p.words()[w];
      any_or |= p.words()[w];
    }
    std::uint64_t bits = all_and | ~any_or;
    if (w + 1 == words && (n & 63) != 0)
      bits &= (std::uint64_t{1} << (n & 63)) - 1;
    agree += std::popcount(bits);
  }
  return agree;
}

}  // namespace

std::int64_t evaluate_statistic(TupleStatistic stat, const SampleTuple& tuple,
                                std::uint32_t r) {
  if (tuple.points.empty())
    throw std::invalid_argument("evaluate_statistic: empty tuple");
  switch (stat) {
    case TupleStatistic::S1MinPairwiseDistance: {
      if (tuple.s() < 2) return 0;
      std::int64_t best = tuple.dimension();
      for (std::size_t i = 0; i < tuple.points.size(); ++i)
        for (std::size_t j = i + 1; j < tuple.points.size(); ++j)
          best = std::min<std::int64_t>(
              best, hamming(tuple.points[i], tuple.points[j]));
      return best;
    }
    case TupleStatistic::S2ConsistentSize:
      return consistent_size(tuple);
    case TupleStatistic::S3SphereCount: {
      const Point maj = coordinatewise_majority(tuple);
      std::int64_t count = 0;
      for (const auto& p : tuple.points)
        if (hamming(p, maj) == r) ++count;
      return count;
    }
  }
  throw std::logic_error("unreachable");
}

AdvantageResult advantage_from_values(std::vector<std::int64_t> values_a,
                                      std::vector<std::int64_t> values_b) {
  if (values_a.size() != values_b.size() || values_a.empty())
    throw std::invalid_argument("advantage_from_values: unbalanced samples");
  const std::uint64_t trials = values_a.size();
  AdvantageResult res;
  res.values_a = std::move(values_a);
  res.values_b = std::move(values_b);

  std::vector<std::int64_t> pooled = res.values_a;
  pooled.insert(pooled.end(), res.values_b.begin(), res.values_b.end());
  std::sort(pooled.begin(), pooled.end());
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());

  auto tail_count = [&](const std::vector<std::int64_t>& vals, std::int64_t th) {
    std::uint64_t c = 0;
    for (auto v : vals) c += (v >= th);
    return c;
  };
  double best = -1.0;
  std::uint64_t best_ca = 0, best_cb = 0;
  for (auto th : pooled) {
    const std::uint64_t ca = tail_count(res.values_a, th);
    const std::uint64_t cb = tail_count(res.values_b, th);
    const double adv = std::abs(static_cast<double>(ca) - static_cast<double>(cb)) /
                       static_cast<double>(trials);
    if (adv > best) {
      best = adv;
      res.best_threshold = th;
      best_ca = ca;
      best_cb = cb;
    }
  }
  res.advantage = best;
  res.ci_a = wilson(best_ca, trials);
  res.ci_b = wilson(best_cb, trials);
  return res;
}

AdvantageResult discriminator_advantage(TupleStatistic stat, std::uint32_t r,
                                        const TupleGenerator& gen_a,
                                        const TupleGenerator& gen_b,
                                        std::uint64_t trials, Rng& rng) {
  if (trials < 100)
    throw std::invalid_argument("discriminator_advantage: trials < 100");
  std::vector<std::int64_t> values_a, values_b;
  values_a.reserve(trials);
  values_b.reserve(trials);
  for (std::uint64_t i = 0; i < trials; ++i)
    values_a.push_back(evaluate_statistic(stat, gen_a(rng), r));
  for (std::uint64_t i = 0; i < trials; ++i)
    values_b.push_back(evaluate_statistic(stat, gen_b(rng), r));
  return advantage_from_values(std::move(values_a), std::move(values_b));
}

}  // namespace relht
