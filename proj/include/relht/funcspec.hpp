#pragma once

// Function models for the yes/no instance families, with MQ (point
// evaluation) and SAMP (uniform satisfying assignment) oracles.
//
// A yes-function is the indicator of the radius-r Hamming ball around a
// center z. A no-function agrees with it off the sphere; on the sphere the
// 2^t pieces cut by t random +-1 hyperplanes through the recentered sphere
// each carry one independent label bit.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "relht/params.hpp"
#include "relht/point.hpp"
#include "relht/rng.hpp"
#include "relht/sampling.hpp"

namespace relht {

// Resolves a t-bit piece index to one label bit. Explicit mode stores all
// 2^t bits; keyed mode derives the bit from a 128-bit seed via a documented
// splitmix64 chain (bit = lsb of splitmix64(lo ^ splitmix64(hi ^ index))),
// identical across runs and platforms.
class LabelTable {
 public:
  LabelTable() = default;  // empty table; lookup on t = 0 has one piece
  static LabelTable make_explicit(std::uint32_t t, std::vector<std::uint64_t> bits);
  static LabelTable make_keyed(std::uint32_t t, std::uint64_t seed_lo,
                               std::uint64_t seed_hi);
  static LabelTable draw_explicit(std::uint32_t t, Rng& rng);

  bool lookup(std::uint64_t piece) const;
  bool is_keyed() const { return keyed_; }
  std::uint32_t t() const { return t_; }

  const std::vector<std::uint64_t>& raw_bits() const { return bits_; }
  std::array<std::uint64_t, 2> seed() const { return {seed_lo_, seed_hi_}; }

 private:
  std::uint32_t t_ = 0;
  bool keyed_ = false;
  std::vector<std::uint64_t> bits_;  // explicit mode, 2^t bits packed
  std::uint64_t seed_lo_ = 0, seed_hi_ = 0;
};

struct BallSpec {
  std::uint32_t n = 0;
  std::uint32_t r = 0;
  Point z;
};

struct NoSpec {
  std::uint32_t n = 0;
  std::uint32_t r = 0;
  Point z;
  std::vector<SignVector> zetas;  // t hyperplanes
  LabelTable labels;

  std::uint32_t t() const { return static_cast<std::uint32_t>(zetas.size()); }
};

bool eval_yes(const BallSpec& spec, const Point& x);

// Defined only on Sphere_r(z); off-sphere input is a hard error. Bit i of
// the result is 1 iff signed_dot(zeta^i, x xor z) >= 0 (ties count as 1).
std::uint64_t piece_index(const NoSpec& spec, const Point& x);

bool eval_no(const NoSpec& spec, const Point& x);

Point samp_yes(const BallSpec& spec, Rng& rng);
Point samp_yes(const BallSpec& spec, const BallWeightTable& table, Rng& rng);

struct SampExhausted : std::runtime_error {
  explicit SampExhausted(std::uint64_t tries)
      : std::runtime_error("samp_no exhausted after " + std::to_string(tries) +
                           " tries") {}
};

// Rejection sampling over the ball; exactly uniform over g^{-1}(1).
// max_tries = 0 selects the default 64x the expected try count under the
// exact ball-weight law with a 1/2 sphere-acceptance heuristic.
Point samp_no(const NoSpec& spec, Rng& rng, std::uint64_t max_tries = 0);
Point samp_no(const NoSpec& spec, const BallWeightTable& table, Rng& rng,
              std::uint64_t max_tries = 0);

// MQ + SAMP oracle interface. samp output always satisfies eval = 1.
class FunctionOracle {
 public:
  virtual ~FunctionOracle() = default;
  virtual bool eval(const Point& x) const = 0;
  virtual Point samp(Rng& rng) const = 0;
  virtual std::uint32_t dimension() const = 0;
};

class BallOracle : public FunctionOracle {
 public:
  explicit BallOracle(BallSpec spec)
      : spec_(std::move(spec)), table_(spec_.n, spec_.r) {}
  bool eval(const Point& x) const override { return eval_yes(spec_, x); }
  Point samp(Rng& rng) const override { return samp_yes(spec_, table_, rng); }
  std::uint32_t dimension() const override { return spec_.n; }
  const BallSpec& spec() const { return spec_; }

 private:
  BallSpec spec_;
  BallWeightTable table_;
};

class NoOracle : public FunctionOracle {
 public:
  explicit NoOracle(NoSpec spec, std::uint64_t max_tries = 0)
      : spec_(std::move(spec)), table_(spec_.n, spec_.r), max_tries_(max_tries) {}
  bool eval(const Point& x) const override { return eval_no(spec_, x); }
  Point samp(Rng& rng) const override {
    return samp_no(spec_, table_, rng, max_tries_);
  }
  std::uint32_t dimension() const override { return spec_.n; }
  const NoSpec& spec() const { return spec_; }

 private:
  NoSpec spec_;
  BallWeightTable table_;
  std::uint64_t max_tries_;
};

// All satisfying assignments in lexicographic order (coordinate 0 first).
// Guarded to n <= 20.
std::vector<Point> enumerate_satisfying(const FunctionOracle& oracle);

// Uniform point of {0,1}^n.
Point uniform_point(std::uint32_t n, Rng& rng);

BallSpec draw_yes(const Params& params, Rng& rng);

// Uniform z, t uniform sign vectors, fresh labels: explicit when 2^t <= 2^26,
// keyed otherwise.
NoSpec draw_no(const Params& params, Rng& rng);

// JSON instance files (bit-exact round trip).
std::string ball_to_json(const BallSpec& spec);
std::string no_to_json(const NoSpec& spec);
BallSpec ball_from_json(const std::string& text);
NoSpec no_from_json(const std::string& text);
// Dispatch on the "type" field; exactly one of the results is set.
std::pair<std::optional<BallSpec>, std::optional<NoSpec>> instance_from_json(
    const std::string& text);

}  // namespace relht
