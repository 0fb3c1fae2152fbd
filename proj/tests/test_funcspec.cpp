#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "relht/funcspec.hpp"
#include "relht/params.hpp"
#include "relht/point.hpp"
#include "relht/rng.hpp"
#include "relht/stats.hpp"

using namespace relht;

namespace {

NoSpec small_no_spec(std::uint32_t n, std::uint32_t r, std::uint32_t t,
                     std::uint64_t seed) {
  Rng rng(seed);
  return draw_no(Params::manual(n, r, 2, t, 1), rng);
}

// Chi-square of draws against the uniform law on `support`.
double uniformity_pvalue(const std::vector<Point>& support,
                         const std::vector<Point>& draws) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < support.size(); ++i)
    index[support[i].to_hex()] = i;
  std::vector<std::uint64_t> observed(support.size(), 0);
  for (const auto& p : draws) {
    auto it = index.find(p.to_hex());
    REQUIRE(it != index.end());
    ++observed[it->second];
  }
  return chi_square_gof(observed, std::vector<double>(support.size(), 1.0))
      .pvalue;
}

}  // namespace

TEST_CASE("eval_yes") {
  const BallSpec spec{4, 2, Point::from_bits("0000")};
  CHECK(eval_yes(spec, Point::from_bits("0011")));
  CHECK_FALSE(eval_yes(spec, Point::from_bits("0111")));
  CHECK(eval_yes(spec, spec.z));
}

TEST_CASE("piece_index sign tests and tie rule") {
  NoSpec spec;
  spec.n = 4;
  spec.r = 2;
  spec.z = Point::from_bits("0000");
  spec.zetas = {SignVector(Point::from_bits("1111"))};  // all +1
  spec.labels = LabelTable::make_explicit(1, {0b10});
  for (const Point& x : {Point::from_bits("1100"), Point::from_bits("0101")})
    CHECK(piece_index(spec, x) == 1);

  spec.zetas = {SignVector(Point::from_bits("0000"))};  // all -1
  CHECK(piece_index(spec, Point::from_bits("1100")) == 0);

  // dots (0, 2): the tie counts as >= 0, so both bits are 1.
  spec.zetas = {SignVector(Point::from_bits("1010")),
                SignVector(Point::from_bits("1111"))};
  CHECK(piece_index(spec, Point::from_bits("1100")) == 0b11);

  CHECK_THROWS_AS(piece_index(spec, Point::from_bits("1000")),
                  std::domain_error);
  CHECK_THROWS_AS(piece_index(spec, Point::from_bits("1110")),
                  std::domain_error);
}

TEST_CASE("eval_no case split") {
  const NoSpec spec = small_no_spec(12, 4, 3, 99);
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const Point inner = sample_sphere(spec.z, spec.r - 1, rng);
    const Point outer = sample_sphere(spec.z, spec.r + 1, rng);
    const Point on = sample_sphere(spec.z, spec.r, rng);
    CHECK(eval_no(spec, inner));
    CHECK_FALSE(eval_no(spec, outer));
    CHECK(eval_no(spec, on) == spec.labels.lookup(piece_index(spec, on)));
    // off the sphere, yes and no agree
    const BallSpec ball{spec.n, spec.r, spec.z};
    CHECK(eval_no(spec, inner) == eval_yes(ball, inner));
    CHECK(eval_no(spec, outer) == eval_yes(ball, outer));
  }
}

TEST_CASE("enumerate_satisfying is lexicographic and complete") {
  BallOracle ball(BallSpec{3, 1, Point(3)});
  const auto pts = enumerate_satisfying(ball);
  REQUIRE(pts.size() == 4);
  CHECK(pts[0] == Point::from_bits("000"));
  CHECK(pts[1] == Point::from_bits("001"));
  CHECK(pts[2] == Point::from_bits("010"));
  CHECK(pts[3] == Point::from_bits("100"));

  // |ball| = sum of binomials
  BallOracle b2(BallSpec{11, 3, Point(11)});
  BallWeightTable table(11, 3);
  CHECK(enumerate_satisfying(b2).size() == table.ball_size().get_ui());

  // all labels 0 at n=3, r=2: exactly the 4 points of weight <= 1
  NoSpec spec;
  spec.n = 3;
  spec.r = 2;
  spec.z = Point(3);
  spec.zetas = {SignVector(Point::from_bits("111"))};
  spec.labels = LabelTable::make_explicit(1, {0});
  CHECK(enumerate_satisfying(NoOracle(spec)).size() == 4);
}

TEST_CASE("samp_yes is exactly uniform on the ball (n=10, r=2)") {
  const BallSpec spec{10, 2, Point::from_bits("0110100101")};
  BallOracle oracle(spec);
  const auto support = enumerate_satisfying(oracle);
  REQUIRE(support.size() == 56);
  Rng rng(77);
  std::vector<Point> draws;
  draws.reserve(100000);
  for (int i = 0; i < 100000; ++i) {
    draws.push_back(oracle.samp(rng));
    CHECK(eval_yes(spec, draws.back()));
  }
  CHECK(uniformity_pvalue(support, draws) > 0.01);
}

TEST_CASE("samp_no is exactly uniform over the satisfying set (n=12, r=2, t=4)") {
  const NoSpec spec = small_no_spec(12, 2, 4, 123);
  NoOracle oracle(spec);
  const auto support = enumerate_satisfying(oracle);
  REQUIRE(!support.empty());
  Rng rng(31);
  std::vector<Point> draws;
  draws.reserve(100000);
  for (int i = 0; i < 100000; ++i) {
    draws.push_back(oracle.samp(rng));
    CHECK(eval_no(spec, draws.back()));
  }
  CHECK(uniformity_pvalue(support, draws) > 0.01);

  // sphere mass matches enumeration exactly
  std::uint64_t on_sphere = 0;
  for (const auto& p : support) on_sphere += (hamming(p, spec.z) == spec.r);
  std::uint64_t labeled_one = 0;
  Rng rng2(5);
  for (const auto& p : enumerate_satisfying(BallOracle({spec.n, spec.r, spec.z})))
    if (hamming(p, spec.z) == spec.r)
      labeled_one += spec.labels.lookup(piece_index(spec, p));
  CHECK(on_sphere == labeled_one);
}

TEST_CASE("samp_no degenerate label tables") {
  // all labels 1: same law as samp_yes (same support)
  NoSpec spec;
  spec.n = 8;
  spec.r = 2;
  spec.z = Point(8);
  spec.zetas = {SignVector(Point::from_bits("10101010"))};
  spec.labels = LabelTable::make_explicit(1, {0b11});
  CHECK(enumerate_satisfying(NoOracle(spec)).size() ==
        enumerate_satisfying(BallOracle({8, 2, Point(8)})).size());

  // all labels 0: uniform over the open ball
  spec.labels = LabelTable::make_explicit(1, {0});
  const auto open_ball = enumerate_satisfying(NoOracle(spec));
  CHECK(open_ball.size() == 9);  // 1 + 8
  Rng rng(17);
  for (int i = 0; i < 500; ++i)
    CHECK(hamming(samp_no(spec, rng), spec.z) < spec.r);
}

TEST_CASE("samp_no exhaustion is signaled") {
  const NoSpec spec = small_no_spec(10, 4, 3, 7);
  bool threw = false;
  for (std::uint64_t seed = 0; seed < 200 && !threw; ++seed) {
    Rng rng(seed);
    try {
      samp_no(spec, rng, 1);  // a single try often lands on a 0-labeled point
    } catch (const SampExhausted&) {
      threw = true;
    }
  }
  CHECK(threw);
}

TEST_CASE("label tables") {
  // keyed mode matches its documented derivation and is stable
  LabelTable keyed = LabelTable::make_keyed(20, 0x1234, 0x5678);
  for (std::uint64_t piece : {0ull, 1ull, 77ull, (1ull << 20) - 1}) {
    std::uint64_t a = 0x5678ull ^ piece;
    std::uint64_t inner = splitmix64(a);
    std::uint64_t b = 0x1234ull ^ inner;
    CHECK(keyed.lookup(piece) == static_cast<bool>(splitmix64(b) & 1));
  }
  CHECK_THROWS(keyed.lookup(1ull << 20));

  Rng rng(3);
  LabelTable expl = LabelTable::draw_explicit(4, rng);
  for (std::uint64_t piece = 0; piece < 16; ++piece)
    CHECK(expl.lookup(piece) == ((expl.raw_bits()[0] >> piece) & 1));
}

TEST_CASE("piece_index equality iff sign-test agreement") {
  const NoSpec spec = small_no_spec(14, 4, 5, 2024);
  Rng rng(8);
  for (int i = 0; i < 2000; ++i) {
    const Point a = sample_sphere(spec.z, spec.r, rng);
    const Point b = sample_sphere(spec.z, spec.r, rng);
    bool all_agree = true;
    for (const auto& zeta : spec.zetas) {
      const bool sa = signed_dot(zeta, xor_points(a, spec.z)) >= 0;
      const bool sb = signed_dot(zeta, xor_points(b, spec.z)) >= 0;
      all_agree = all_agree && (sa == sb);
    }
    CHECK((piece_index(spec, a) == piece_index(spec, b)) == all_agree);
  }
}

TEST_CASE("draw_yes / draw_no determinism and marginals") {
  const Params params = Params::manual(64, 6, 2, 5, 2);
  Rng a(55), b(55);
  CHECK(no_to_json(draw_no(params, a)) == no_to_json(draw_no(params, b)));
  CHECK(ball_to_json(draw_yes(params, a)) == ball_to_json(draw_yes(params, b)));

  // z-coordinate marginal ~ 1/2
  Rng rng(4);
  const int draws = 20000;
  int ones = 0;
  for (int i = 0; i < draws; ++i) ones += draw_yes(params, rng).z.get(17);
  const double sd = std::sqrt(draws * 0.25);
  CHECK(std::abs(ones - draws / 2.0) < 4 * sd);

  // t > 26 switches to a keyed table
  Rng rng2(5);
  CHECK(draw_no(Params::manual(256, 8, 2, 30, 1), rng2).labels.is_keyed());
  Rng rng3(5);
  CHECK_FALSE(draw_no(Params::manual(256, 8, 2, 24, 1), rng3).labels.is_keyed());
}

TEST_CASE("JSON instance round trips are bit-exact") {
  const Params params = Params::manual(70, 6, 2, 5, 2);
  Rng rng(91);
  const BallSpec ball = draw_yes(params, rng);
  const BallSpec ball2 = ball_from_json(ball_to_json(ball));
  CHECK(ball2.n == ball.n);
  CHECK(ball2.r == ball.r);
  CHECK(ball2.z == ball.z);

  for (std::uint32_t t : {5u, 30u}) {
    const NoSpec no = draw_no(Params::manual(70, 6, 2, t, 2), rng);
    const NoSpec no2 = no_from_json(no_to_json(no));
    CHECK(no2.z == no.z);
    REQUIRE(no2.t() == no.t());
    for (std::uint32_t i = 0; i < no.t(); ++i)
      CHECK(no2.zetas[i] == no.zetas[i]);
    CHECK(no2.labels.is_keyed() == no.labels.is_keyed());
    Rng probe(1);
    for (int i = 0; i < 100; ++i) {
      const Point x = sample_sphere(no.z, no.r, probe);
      CHECK(eval_no(no, x) == eval_no(no2, x));
    }
    CHECK(no_to_json(no2) == no_to_json(no));
  }

  const auto [ob, on] = instance_from_json(ball_to_json(ball));
  CHECK(ob.has_value());
  CHECK_FALSE(on.has_value());
}
