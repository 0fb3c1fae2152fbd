#include "relht/adversary.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "relht/funcspec.hpp"
#include "relht/sampling.hpp"

namespace relht {

ColPartition col_partition(const SampleTuple& u) {
  const std::uint32_t s = u.s();
  if (s == 0) throw std::invalid_argument("col_partition: empty tuple");
  if (s > 63) throw std::invalid_argument("col_partition: s > 63");
  const std::uint32_t n = u.dimension();
  for (const auto& p : u.points)
    if (p.dimension() != n)
      throw std::invalid_argument("col_partition: dimension mismatch");
  ColPartition part;
  part.s = s;
  part.n = n;
  for (std::uint32_t j = 0; j < n; ++j) {
    std::uint64_t c = 0;
    for (std::uint32_t i = 0; i < s; ++i)
      if (u.points[i].get(j)) c |= std::uint64_t{1} << i;
    part.classes[c].push_back(j);
  }
  return part;
}

std::vector<std::uint32_t> consistent_set(const SampleTuple& u) {
  const std::uint32_t s = u.s();
  if (s == 0) throw std::invalid_argument("consistent_set: empty tuple");
  const std::uint32_t n = u.dimension();
  std::vector<std::uint32_t> out;
  for (std::uint32_t j = 0; j < n; ++j) {
    const bool b = u.points[0].get(j);
    bool agree = true;
    for (std::uint32_t i = 1; i < s && agree; ++i)
      agree = (u.points[i].get(j) == b);
    if (agree) out.push_back(j);
  }
  return out;
}

GoodnessReport check_good(const Point& z, const SampleTuple& u,
                          const Params& params, double sigma) {
  const std::uint32_t s = u.s();
  const std::uint32_t n = u.dimension();
  if (z.dimension() != n)
    throw std::invalid_argument("check_good: dimension mismatch");
  if (s > 26) throw std::invalid_argument("check_good: s > 26");
  const double delta = params.delta;
  const ColPartition part = col_partition(u);

  GoodnessReport report;
  report.sigma = sigma;
  report.slack = std::pow(static_cast<double>(n), sigma);
  report.pass = true;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << s); ++c) {
    PatternReport pr;
    pr.pattern = c;
    const auto& coords = part.of(c);
    pr.size = static_cast<std::uint32_t>(coords.size());
    for (auto j : coords) (z.get(j) ? pr.ones : pr.zeros)++;
    const int w = std::popcount(c);
    pr.expected_zeros = 0.5 * n * std::pow(delta, w) * std::pow(1 - delta, s - w);
    pr.expected_ones = 0.5 * n * std::pow(delta, s - w) * std::pow(1 - delta, w);
    pr.pass = std::abs(pr.zeros - pr.expected_zeros) <= report.slack &&
              std::abs(pr.ones - pr.expected_ones) <= report.slack;
    report.pass = report.pass && pr.pass;
    report.patterns.push_back(pr);
  }
  return report;
}

std::pair<Point, SampleTuple> joint_draw(const Params& params, Rng& rng) {
  Point z = uniform_point(params.n, rng);
  SampleTuple u;
  u.points.reserve(params.s);
  for (std::uint32_t i = 0; i < params.s; ++i)
    u.points.push_back(sample_sphere(z, params.r, rng));
  return {std::move(z), std::move(u)};
}

Point conditional_center(const SampleTuple& u, const Params& params, Rng& rng,
                         std::uint64_t max_tries) {
  if (u.s() == 0) throw std::invalid_argument("conditional_center: empty tuple");
  if (u.dimension() != params.n)
    throw std::invalid_argument("conditional_center: dimension mismatch");
  for (std::uint64_t tries = 0; tries < max_tries; ++tries) {
    Point candidate = sample_sphere(u.points[0], params.r, rng);
    bool ok = true;
    for (std::uint32_t i = 1; i < u.s() && ok; ++i)
      ok = (hamming(u.points[i], candidate) == params.r);
    if (ok) return candidate;
  }
  throw RejectionExhausted(max_tries);
}

AttackStrategy strategy_from_name(const std::string& name) {
  if (name == "consistent_flip") return AttackStrategy::ConsistentFlip;
  if (name == "toward_away") return AttackStrategy::TowardAway;
  if (name == "random_flip") return AttackStrategy::RandomFlip;
  if (name == "clairvoyant") return AttackStrategy::Clairvoyant;
  throw std::invalid_argument("unknown strategy: " + name);
}

std::string strategy_name(AttackStrategy s) {
  switch (s) {
    case AttackStrategy::ConsistentFlip: return "consistent_flip";
    case AttackStrategy::TowardAway: return "toward_away";
    case AttackStrategy::RandomFlip: return "random_flip";
    case AttackStrategy::Clairvoyant: return "clairvoyant";
  }
  throw std::logic_error("unreachable");
}

namespace {

// k distinct elements of `candidates`, uniform, by partial Fisher-Yates.
std::vector<std::uint32_t> choose_k(std::vector<std::uint32_t> candidates,
                                    std::uint32_t k, const char* what,
                                    Rng& rng) {
  if (candidates.size() < k)
    throw StrategyExhausted(std::string(what) + ": needs " + std::to_string(k) +
                            " candidate coordinates, only " +
                            std::to_string(candidates.size()) + " available");
  for (std::uint32_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(candidates.size() - i));
    std::swap(candidates[i], candidates[j]);
  }
  candidates.resize(k);
  return candidates;
}

}  // namespace

Point attack(AttackStrategy strategy, const SampleTuple& u,
             std::uint32_t t_prime, Rng& rng, const Point* z_for_clairvoyant) {
  const std::uint32_t s = u.s();
  if (s == 0) throw std::invalid_argument("attack: empty tuple");
  const std::uint32_t n = u.dimension();
  if (t_prime % 2 != 0 || t_prime == 0 || t_prime > n)
    throw std::invalid_argument("attack: t' must be even, positive, <= n");
  const Point& u1 = u.points[0];

  std::vector<std::uint32_t> flips;
  switch (strategy) {
    case AttackStrategy::ConsistentFlip:
      flips = choose_k(consistent_set(u), t_prime, "consistent_flip", rng);
      break;
    case AttackStrategy::TowardAway: {
      flips = choose_k(consistent_set(u), t_prime / 2, "toward_away", rng);
      std::vector<bool> taken(n, false);
      for (auto j : flips) taken[j] = true;
      std::vector<std::uint32_t> lone;  // u^1 disagrees with every other sample
      for (std::uint32_t j = 0; j < n; ++j) {
        if (taken[j]) continue;
        bool all_differ = true;
        for (std::uint32_t i = 1; i < s && all_differ; ++i)
          all_differ = (u.points[i].get(j) != u1.get(j));
        if (all_differ) lone.push_back(j);
      }
      auto away = choose_k(std::move(lone), t_prime / 2, "toward_away", rng);
      flips.insert(flips.end(), away.begin(), away.end());
      break;
    }
    case AttackStrategy::RandomFlip: {
      std::vector<std::uint32_t> all(n);
      for (std::uint32_t j = 0; j < n; ++j) all[j] = j;
      flips = choose_k(std::move(all), t_prime, "random_flip", rng);
      break;
    }
    case AttackStrategy::Clairvoyant: {
      if (z_for_clairvoyant == nullptr)
        throw std::invalid_argument("clairvoyant attack requires z");
      if (z_for_clairvoyant->dimension() != n)
        throw std::invalid_argument("attack: dimension mismatch");
      std::vector<std::uint32_t> inside, outside;
      for (std::uint32_t j = 0; j < n; ++j)
        (u1.get(j) != z_for_clairvoyant->get(j) ? inside : outside).push_back(j);
      flips = choose_k(std::move(inside), t_prime / 2, "clairvoyant", rng);
      auto out = choose_k(std::move(outside), t_prime / 2, "clairvoyant", rng);
      flips.insert(flips.end(), out.begin(), out.end());
      break;
    }
  }

  Point y = u1;
  for (auto j : flips) y.flip(j);
  return y;
}

AttackResult attack_experiment(AttackStrategy strategy, const Params& params,
                               std::uint32_t t_prime,
                               std::uint32_t closeness_threshold,
                               std::uint64_t trials, std::uint64_t master_seed,
                               double sigma, bool sanity) {
  if (strategy == AttackStrategy::Clairvoyant && !sanity)
    throw std::invalid_argument(
        "clairvoyant strategy is diagnostic-only; pass sanity=true");
  AttackResult result;
  result.trials = trials;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    Rng rng = derive_stream(master_seed, trial);
    auto [z, u] = joint_draw(params, rng);
    const bool good = check_good(z, u, params, sigma).pass;
    if (good) ++result.good_count;
    Point y;
    try {
      y = attack(strategy, u, t_prime, rng,
                 strategy == AttackStrategy::Clairvoyant ? &z : nullptr);
    } catch (const StrategyExhausted&) {
      ++result.strategy_failures;  // an adversary that cannot move cannot hit
      continue;
    }
    bool hit = (hamming(y, z) == params.r);
    for (std::uint32_t i = 0; i < u.s() && hit; ++i)
      hit = (hamming(y, u.points[i]) >= closeness_threshold);
    if (hit) {
      ++result.hits;
      if (good) ++result.hits_with_good;
    }
  }
  result.hit_ci = wilson(result.hits, trials == 0 ? 1 : trials);
  return result;
}

}  // namespace relht
