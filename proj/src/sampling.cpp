#include "relht/sampling.hpp"

#include <stdexcept>
#include <unordered_set>

namespace relht {

Point sample_sphere(const Point& z, std::uint32_t r, Rng& rng) {
  const std::uint32_t n = z.dimension();
  if (r > n) throw std::invalid_argument("sphere radius exceeds dimension");
  Point out = z;
  // Floyd's algorithm: uniform r-subset of [0, n).
  std::unordered_set<std::uint32_t> chosen;
  chosen.reserve(r * 2);
  for (std::uint32_t i = n - r; i < n; ++i) {
    std::uint32_t j = static_cast<std::uint32_t>(rng.below(i + 1));
    if (!chosen.insert(j).second) {
      chosen.insert(i);
      out.flip(i);
    } else {
      out.flip(j);
    }
  }
  return out;
}

BallWeightTable::BallWeightTable(std::uint32_t n, std::uint32_t r) : n_(n), r_(r) {
  if (r > n) throw std::invalid_argument("ball radius exceeds dimension");
  binom_.resize(r + 1);
  cum_.resize(r + 1);
  binom_[0] = 1;
  cum_[0] = 1;
  for (std::uint32_t k = 1; k <= r; ++k) {
    binom_[k] = binom_[k - 1] * (n - k + 1) / k;
    cum_[k] = cum_[k - 1] + binom_[k];
  }
}

mpq_class BallWeightTable::off_sphere_probability() const {
  mpq_class p(ball_size() - binom_[r_], ball_size());
  p.canonicalize();
  return p;
}

mpz_class uniform_mpz_below(const mpz_class& bound, Rng& rng) {
  if (bound <= 0) throw std::invalid_argument("bound must be positive");
  const std::size_t nbits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  const std::size_t nwords = (nbits + 63) / 64;
  const unsigned top_bits = static_cast<unsigned>(nbits % 64);
  for (;;) {
    // nbits random bits, first word most significant (and masked), so the
    // candidate is uniform in [0, 2^nbits) and accepted with chance >= 1/2.
    mpz_class v = 0;
    for (std::size_t i = 0; i < nwords; ++i) {
      std::uint64_t w = rng.next_u64();
      if (i == 0 && top_bits != 0) w &= (std::uint64_t{1} << top_bits) - 1;
      mpz_class chunk(static_cast<unsigned long>(w >> 32));
      chunk <<= 32;
      chunk += static_cast<unsigned long>(w & 0xffffffffULL);
      v <<= 64;
      v += chunk;
    }
    if (v < bound) return v;
  }
}

std::uint32_t BallWeightTable::sample_weight(Rng& rng) const {
  mpz_class v = uniform_mpz_below(cum_.back(), rng);
  // First k with v < cum_[k].
  std::uint32_t lo = 0, hi = r_;
  while (lo < hi) {
    std::uint32_t mid = (lo + hi) / 2;
    if (v < cum_[mid])
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

Point sample_ball(const Point& z, const BallWeightTable& table, Rng& rng) {
  if (table.n() != z.dimension())
    throw std::invalid_argument("ball table dimension mismatch");
  return sample_sphere(z, table.sample_weight(rng), rng);
}

Point sample_ball(const Point& z, std::uint32_t r, Rng& rng) {
  BallWeightTable table(z.dimension(), r);
  return sample_ball(z, table, rng);
}

}  // namespace relht
