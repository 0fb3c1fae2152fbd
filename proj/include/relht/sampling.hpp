#pragma once

// Exactly uniform samplers for Hamming spheres and balls.
//
// Sphere sampling flips a uniform r-subset of coordinates. Ball sampling
// first draws the weight k with probability C(n,k)/sum_{j<=r} C(n,j), using
// exact integer binomial tallies (the multiplicative recurrence
// C(n,k) = C(n,k-1)*(n-k+1)/k in mpz), then samples the sphere of that
// radius; no floating point enters the weight law.

#include <gmpxx.h>

#include <vector>

#include "relht/point.hpp"
#include "relht/rng.hpp"

namespace relht {

Point sample_sphere(const Point& z, std::uint32_t r, Rng& rng);

// Exact cumulative binomial tallies for the radius-r ball in {0,1}^n.
class BallWeightTable {
 public:
  BallWeightTable(std::uint32_t n, std::uint32_t r);

  std::uint32_t n() const { return n_; }
  std::uint32_t r() const { return r_; }

  const mpz_class& binomial(std::uint32_t k) const { return binom_[k]; }
  const mpz_class& ball_size() const { return cum_.back(); }  // sum_{k<=r} C(n,k)

  // Pr[point of the uniform ball lies off the sphere] = 1 - C(n,r)/ball_size.
  mpq_class off_sphere_probability() const;

  // Exactly uniform weight draw: k with probability C(n,k)/ball_size.
  std::uint32_t sample_weight(Rng& rng) const;

 private:
  std::uint32_t n_, r_;
  std::vector<mpz_class> binom_;  // C(n,0..r)
  std::vector<mpz_class> cum_;    // prefix sums of binom_
};

Point sample_ball(const Point& z, std::uint32_t r, Rng& rng);
Point sample_ball(const Point& z, const BallWeightTable& table, Rng& rng);

// Uniform mpz in [0, bound), by rejection on the top bits.
mpz_class uniform_mpz_below(const mpz_class& bound, Rng& rng);

}  // namespace relht
