#pragma once

// Exact linear-threshold-function machinery: rational feasibility checks,
// good/violating 4-tuples, greedy disjoint packing, and relative-distance
// certificates.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relht/funcspec.hpp"
#include "relht/point.hpp"
#include "relht/rng.hpp"

namespace relht {

class LabeledSet {
 public:
  LabeledSet() = default;
  explicit LabeledSet(std::uint32_t n) : n_(n) {}

  // Throws on a duplicate point with a conflicting label; a consistent
  // duplicate is dropped.
  void add(const Point& p, bool label);

  std::uint32_t dimension() const { return n_; }
  const std::vector<std::pair<Point, bool>>& pairs() const { return pairs_; }

 private:
  std::uint32_t n_ = 0;
  std::vector<std::pair<Point, bool>> pairs_;
};

struct LtfWitness {
  bool feasible = false;
  // feasible: h(x) = 1[weights . x >= theta] reproduces every label, with
  // margin >= 1 on both sides after the margin-1 scaling.
  std::vector<mpq_class> weights;
  mpq_class theta;
  // infeasible: nonzero entries of the Farkas ray, (index into pairs(), y).
  std::vector<std::pair<std::size_t, mpq_class>> certificate;
};

// Exact rational feasibility of the labels as an LTF. Guarded to 10^6 points.
LtfWitness is_ltf(const LabeledSet& set);

// Four sphere points around z built from pairwise disjoint index sets
// J1..J4 of size r/2: in u-space (u^i = x^i xor z) the supports are
// u1 = J1|J3, u2 = J1|J4, u3 = J2|J3, u4 = J2|J4, so x1+x4 = x2+x3.
struct GoodTuple {
  Point z;
  std::uint32_t r = 0;
  std::array<std::vector<std::uint32_t>, 4> js;
  std::array<Point, 4> points;
};

GoodTuple make_good_tuple(const Point& z, std::uint32_t r,
                          const std::array<std::vector<std::uint32_t>, 4>& js);
GoodTuple make_good_tuple(const Point& z, std::uint32_t r, Rng& rng);

// 1 iff the oracle labels (x1, x2, x3, x4) as (a, b, b, a) with a != b.
bool is_violating(const GoodTuple& tuple, const FunctionOracle& oracle);

// Greedy maximal subfamily with pairwise disjoint 4-point sets, in pool order.
std::vector<GoodTuple> greedy_disjoint_pack(const std::vector<GoodTuple>& pool);

// floor(n / 2r) tuples on disjoint coordinate blocks; pairwise disjoint by
// construction.
std::vector<GoodTuple> block_family(const Point& z, std::uint32_t r);

enum class DenominatorMode { Exact, UpperBound };

struct RelDistCertificate {
  std::vector<GoodTuple> family;
  std::vector<bool> violating;
  std::uint64_t violating_count = 0;
  DenominatorMode mode = DenominatorMode::UpperBound;
  mpz_class denominator;
  mpq_class bound;  // violating_count / denominator <= rel-dist(g, LTF)
};

RelDistCertificate reldist_lower_cert(const NoSpec& spec,
                                      const std::vector<GoodTuple>& family,
                                      DenominatorMode mode);

std::string certificate_to_json(const RelDistCertificate& cert);

// Truth tables indexed little-endian: bit v of the table is f(p) where
// coordinate j of p is bit j of v.
Point point_from_index(std::uint32_t n, std::uint32_t v);
std::uint32_t index_from_point(const Point& p);
std::uint32_t truth_table(const FunctionOracle& oracle);  // n <= 4

// All LTF truth tables on n <= 4 variables, sorted.
std::vector<std::uint32_t> enumerate_ltfs(std::uint32_t n);

// min over LTFs h of |f^-1(1) symdiff h^-1(1)| / |f^-1(1)|. Errors on f == 0.
mpq_class reldist_exact_small(std::uint32_t table, std::uint32_t n);
mpq_class reldist_exact_small(std::uint32_t table, std::uint32_t n,
                              const std::vector<std::uint32_t>& ltfs);

}  // namespace relht
