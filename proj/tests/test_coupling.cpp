#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "relht/coupling.hpp"
#include "relht/funcspec.hpp"
#include "relht/sampling.hpp"
#include "relht/stats.hpp"

using namespace relht;

namespace {

NoSpec all_one_spec(std::uint32_t n, std::uint32_t r) {
  NoSpec spec;
  spec.n = n;
  spec.r = r;
  spec.z = Point(n);
  spec.zetas = {SignVector(Point(n))};
  spec.labels = LabelTable::make_explicit(1, {0b11});
  return spec;
}

std::string tuple_key(const SampleTuple& t) {
  std::string key;
  for (const auto& p : t.points) key += p.to_hex() + ":";
  return key;
}

double product_uniform_pvalue(const std::vector<Point>& support,
                              std::uint32_t s,
                              const std::vector<SampleTuple>& draws) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& t : draws) ++counts[tuple_key(t)];
  std::size_t cells = 1;
  for (std::uint32_t i = 0; i < s; ++i) cells *= support.size();
  std::vector<std::uint64_t> observed;
  observed.reserve(cells);
  // enumerate all s-tuples over the support
  std::vector<std::size_t> idx(s, 0);
  for (;;) {
    SampleTuple t;
    for (auto i : idx) t.points.push_back(support[i]);
    auto it = counts.find(tuple_key(t));
    observed.push_back(it == counts.end() ? 0 : it->second);
    if (it != counts.end()) counts.erase(it);
    std::uint32_t j = 0;
    while (j < s && idx[j] + 1 == support.size()) idx[j++] = 0;
    if (j == s) break;
    ++idx[j];
  }
  REQUIRE(counts.empty());  // nothing outside the support
  return chi_square_gof(observed, std::vector<double>(observed.size(), 1.0))
      .pvalue;
}

}  // namespace

TEST_CASE("draw_tuple kinds") {
  const Params params = Params::manual(32, 4, 3, 2, 1);
  Rng rng(7);
  const Point z = uniform_point(32, rng);
  const SampleTuple sph = draw_tuple(TupleKind::Sphere, z, params, rng);
  REQUIRE(sph.s() == 3);
  for (const auto& p : sph.points) CHECK(hamming(p, z) == 4);
  const SampleTuple ball = draw_tuple(TupleKind::Ball, z, params, rng);
  for (const auto& p : ball.points) CHECK(hamming(p, z) <= 4);
  CHECK_THROWS(draw_tuple(TupleKind::No, z, params, rng));  // missing spec
}

TEST_CASE("ball tuples are product-uniform at n=4, r=2, s=2") {
  const Params params = Params::manual(4, 2, 2, 1, 1, 0.49);
  const Point z(4);
  const auto support = enumerate_satisfying(BallOracle({4, 2, z}));
  REQUIRE(support.size() == 11);
  Rng rng(19);
  std::vector<SampleTuple> draws;
  draws.reserve(60000);
  for (int i = 0; i < 60000; ++i)
    draws.push_back(draw_tuple(TupleKind::Ball, z, params, rng));
  CHECK(product_uniform_pvalue(support, 2, draws) > 0.01);
}

TEST_CASE("no-tuples with all labels 1 follow the ball law") {
  const Params params = Params::manual(4, 2, 2, 1, 1, 0.49);
  const NoSpec spec = all_one_spec(4, 2);
  const auto support = enumerate_satisfying(BallOracle({4, 2, spec.z}));
  Rng rng(23);
  std::vector<SampleTuple> draws;
  draws.reserve(60000);
  for (int i = 0; i < 60000; ++i)
    draws.push_back(draw_tuple(TupleKind::No, spec.z, params, rng, &spec));
  CHECK(product_uniform_pvalue(support, 2, draws) > 0.01);
}

TEST_CASE("ball tuples conditioned on the sphere follow the sphere law") {
  const Params params = Params::manual(5, 2, 2, 1, 1);
  const Point z(5);
  std::vector<Point> sphere;
  for (const auto& p : enumerate_satisfying(BallOracle({5, 2, z})))
    if (hamming(p, z) == 2) sphere.push_back(p);
  REQUIRE(sphere.size() == 10);
  Rng rng(29);
  std::vector<SampleTuple> kept;
  for (int i = 0; i < 150000; ++i) {
    SampleTuple t = draw_tuple(TupleKind::Ball, z, params, rng);
    bool all_on = true;
    for (const auto& p : t.points) all_on = all_on && hamming(p, z) == 2;
    if (all_on) kept.push_back(std::move(t));
  }
  REQUIRE(kept.size() > 20000);
  CHECK(product_uniform_pvalue(sphere, 2, kept) > 0.01);
}

TEST_CASE("coupled_draw selection logic and nil cases") {
  const Params params = Params::manual(16, 4, 2, 3, 1);
  Rng rng(31);
  const NoSpec spec = draw_no(params, rng);
  bool saw_v_nil = false, saw_w_tuple = false, saw_all_heads_prefix = false;
  for (int i = 0; i < 2000; ++i) {
    const CoupledDraw cd = coupled_draw(spec.z, params, spec, rng);
    REQUIRE(cd.shared_base.size() == 3 * params.s);
    // re-derive the selections from the recorded coins / g values
    std::vector<Point> v_expect, w_expect;
    for (std::size_t k = 0; k < cd.shared_base.size(); ++k) {
      if (cd.coins[k] && v_expect.size() < params.s)
        v_expect.push_back(cd.shared_base[k]);
      CHECK(cd.g_values[k] == eval_no(spec, cd.shared_base[k]));
      if (cd.g_values[k] && w_expect.size() < params.s)
        w_expect.push_back(cd.shared_base[k]);
    }
    if (v_expect.size() < params.s) {
      CHECK_FALSE(cd.v_star.has_value());
      saw_v_nil = true;
    } else {
      REQUIRE(cd.v_star.has_value());
      CHECK(cd.v_star->points == v_expect);
    }
    if (w_expect.size() < params.s) {
      CHECK_FALSE(cd.w_star.has_value());
    } else {
      REQUIRE(cd.w_star.has_value());
      CHECK(cd.w_star->points == w_expect);
      saw_w_tuple = true;
    }
    if (cd.coins[0] && cd.coins[1]) {
      saw_all_heads_prefix = true;
      CHECK(cd.v_star->points ==
            std::vector<Point>{cd.shared_base[0], cd.shared_base[1]});
    }
  }
  CHECK(saw_v_nil);
  CHECK(saw_w_tuple);
  CHECK(saw_all_heads_prefix);
}

TEST_CASE("v_star nil probability matches the exact binomial tail at s=5") {
  const Params params = Params::manual(64, 4, 5, 2, 1);
  Rng rng(37);
  const NoSpec spec = draw_no(params, rng);
  const int draws = 20000;
  int nil = 0;
  for (int i = 0; i < draws; ++i)
    nil += !coupled_draw(spec.z, params, spec, rng).v_star.has_value();
  const double p = 1941.0 / 32768.0;  // Pr[Bin(15,1/2) < 5]
  const double sd = std::sqrt(p * (1 - p) * draws);
  CHECK(std::abs(nil - p * draws) < 3 * sd);
}

TEST_CASE("non-nil v_star follows the ball-tuple law at n=4, r=2, s=2") {
  const Params params = Params::manual(4, 2, 2, 1, 1, 0.49);
  const NoSpec spec = all_one_spec(4, 2);
  const auto support = enumerate_satisfying(BallOracle({4, 2, spec.z}));
  Rng rng(41);
  std::vector<SampleTuple> kept;
  for (int i = 0; i < 80000; ++i) {
    const CoupledDraw cd = coupled_draw(spec.z, params, spec, rng);
    if (cd.v_star) kept.push_back(*cd.v_star);
  }
  REQUIRE(kept.size() > 50000);
  CHECK(product_uniform_pvalue(support, 2, kept) > 0.01);
}

TEST_CASE("margin_stats") {
  NoSpec spec = all_one_spec(16, 4);
  spec.zetas = {SignVector(Point::from_hex(16, "ffff"))};  // all +1
  Rng rng(43);
  SampleTuple tuple;
  for (int i = 0; i < 5; ++i)
    tuple.points.push_back(sample_sphere(spec.z, 4, rng));
  for (auto m : margin_stats(spec, tuple)) CHECK(m == 4);

  spec = draw_no(Params::manual(16, 4, 2, 6, 1), rng);
  tuple.points.clear();
  for (int i = 0; i < 5; ++i)
    tuple.points.push_back(sample_sphere(spec.z, 4, rng));
  const auto margins = margin_stats(spec, tuple);
  CHECK(margins.size() == 5 * spec.t());
  for (auto m : margins) CHECK(m <= 4);

  tuple.points.push_back(spec.z);  // off the sphere
  CHECK_THROWS(margin_stats(spec, tuple));
}

TEST_CASE("sphere margins concentrate at sqrt(r) scale (n=4096, r=28)") {
  Rng rng(47);
  const Params params = Params::manual(4096, 28, 2, 4, 1);
  const NoSpec spec = draw_no(params, rng);
  SampleTuple tuple;
  for (int i = 0; i < 500; ++i)
    tuple.points.push_back(sample_sphere(spec.z, 28, rng));
  const auto margins = margin_stats(spec, tuple);
  double mean = 0;
  for (auto m : margins) mean += static_cast<double>(m);
  mean /= margins.size();
  CHECK(mean > 0.5 * std::sqrt(28.0));
  CHECK(mean < 3.0 * std::sqrt(28.0));
}

TEST_CASE("pairwise support intersections concentrate at r^2/n") {
  Rng rng(53);
  const std::uint32_t n = 4096, r = 28;
  const Point z(n);
  const int pairs = 2000;
  double sum = 0;
  for (int i = 0; i < pairs; ++i) {
    const Point a = sample_sphere(z, r, rng);
    const Point b = sample_sphere(z, r, rng);
    std::uint64_t inter = 0;
    for (std::size_t w = 0; w < a.words().size(); ++w)
      inter += std::popcount(a.words()[w] & b.words()[w]);
    sum += static_cast<double>(inter);
  }
  const double mean = sum / pairs;
  const double expect = static_cast<double>(r) * r / n;
  const double sd_mean = std::sqrt(expect / pairs);  // Poisson-like spread
  CHECK(std::abs(mean - expect) < 3 * sd_mean);
}

TEST_CASE("statistics and majority") {
  SampleTuple t;
  t.points = {Point::from_bits("1100"), Point::from_bits("1010")};
  CHECK(coordinatewise_majority(t) == Point::from_bits("1000"));  // ties -> 0
  CHECK(evaluate_statistic(TupleStatistic::S1MinPairwiseDistance, t, 2) == 2);
  CHECK(evaluate_statistic(TupleStatistic::S2ConsistentSize, t, 2) == 2);
  t.points = {Point::from_bits("1100"), Point::from_bits("1100"),
              Point::from_bits("0011")};
  CHECK(coordinatewise_majority(t) == Point::from_bits("1100"));
  CHECK(evaluate_statistic(TupleStatistic::S1MinPairwiseDistance, t, 2) == 0);
  CHECK(evaluate_statistic(TupleStatistic::S3SphereCount, t, 4) == 1);
  CHECK(statistic_from_name("S2") == TupleStatistic::S2ConsistentSize);
  CHECK(statistic_name(TupleStatistic::S3SphereCount) == "S3");
  CHECK_THROWS(statistic_from_name("S9"));
}

TEST_CASE("identical generators give near-zero advantage") {
  const Params params = Params::manual(64, 6, 3, 2, 1);
  Rng rng(59);
  const Point z = uniform_point(64, rng);
  auto table = std::make_shared<BallWeightTable>(64, 6);
  TupleGenerator gen = [&](Rng& r) {
    return draw_tuple(TupleKind::Ball, z, params, *table, r);
  };
  const auto adv = discriminator_advantage(TupleStatistic::S2ConsistentSize, 6,
                                           gen, gen, 1500, rng);
  CHECK(adv.advantage < 0.07);
  CHECK_THROWS(discriminator_advantage(TupleStatistic::S2ConsistentSize, 6,
                                       gen, gen, 50, rng));
}

TEST_CASE("sphere vs ball advantage is bounded by s * off-sphere probability") {
  const Params params = Params::manual(512, 10, 4, 2, 1);
  Rng rng(61);
  const Point z = uniform_point(512, rng);
  auto table = std::make_shared<BallWeightTable>(512, 10);
  TupleGenerator gen_sphere = [&](Rng& r) {
    return draw_tuple(TupleKind::Sphere, z, params, *table, r);
  };
  TupleGenerator gen_ball = [&](Rng& r) {
    return draw_tuple(TupleKind::Ball, z, params, *table, r);
  };
  const auto adv = discriminator_advantage(TupleStatistic::S1MinPairwiseDistance,
                                           10, gen_sphere, gen_ball, 1500, rng);
  const double bound =
      params.s * table->off_sphere_probability().get_d() + 0.05;
  CHECK(adv.advantage <= bound);
}
