#include "relht/ltf.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <stdexcept>

#include "relht/rational_lp.hpp"
#include "relht/sampling.hpp"

namespace relht {

using json = nlohmann::json;

void LabeledSet::add(const Point& p, bool label) {
  if (pairs_.empty() && n_ == 0) n_ = p.dimension();
  if (p.dimension() != n_)
    throw std::invalid_argument("LabeledSet dimension mismatch");
  for (const auto& [q, l] : pairs_) {
    if (q == p) {
      if (l != label) throw std::invalid_argument("conflicting labels");
      return;
    }
  }
  pairs_.emplace_back(p, label);
}

LtfWitness is_ltf(const LabeledSet& set) {
  if (set.pairs().size() > 1000000)
    throw std::invalid_argument("is_ltf size guard exceeded");
  const std::uint32_t n = set.dimension();
  // Margin-1 system over v = (w, tau): w.x - tau >= 1 on 1-points,
  // -w.x + tau >= 1 on 0-points.
  std::vector<std::vector<int>> rows;
  rows.reserve(set.pairs().size());
  for (const auto& [p, label] : set.pairs()) {
    std::vector<int> row(n + 1);
    const int sgn = label ? 1 : -1;
    for (std::uint32_t j = 0; j < n; ++j) row[j] = p.get(j) ? sgn : 0;
    row[n] = -sgn;
    rows.push_back(std::move(row));
  }
  FeasibilityResult fr = solve_margin_feasibility(rows);
  LtfWitness w;
  w.feasible = fr.feasible;
  if (fr.feasible) {
    w.weights.assign(fr.witness.begin(), fr.witness.begin() + n);
    w.theta = n < fr.witness.size() ? fr.witness[n] : mpq_class(0);
    // Re-evaluate the witness against every label before returning.
    for (const auto& [p, label] : set.pairs()) {
      mpq_class dot = 0;
      for (std::uint32_t j = 0; j < n; ++j)
        if (p.get(j)) dot += w.weights[j];
      if ((dot >= w.theta) != label)
        throw std::logic_error("LTF witness fails label re-check");
    }
  } else {
    for (std::size_t i = 0; i < fr.ray.size(); ++i)
      if (fr.ray[i] != 0) w.certificate.emplace_back(i, fr.ray[i]);
  }
  return w;
}

GoodTuple make_good_tuple(const Point& z, std::uint32_t r,
                          const std::array<std::vector<std::uint32_t>, 4>& js) {
  const std::uint32_t n = z.dimension();
  if (r % 2 != 0) throw std::invalid_argument("r must be even");
  if (2 * r > n) throw std::invalid_argument("good tuple needs 2r <= n");
  std::set<std::uint32_t> seen;
  for (const auto& j : js) {
    if (j.size() != r / 2) throw std::invalid_argument("|J_i| must be r/2");
    for (auto idx : j) {
      if (idx >= n) throw std::invalid_argument("J index out of range");
      if (!seen.insert(idx).second)
        throw std::invalid_argument("J sets must be pairwise disjoint");
    }
  }
  GoodTuple t;
  t.z = z;
  t.r = r;
  t.js = js;
  // u-space supports: u1 = J1|J3, u2 = J1|J4, u3 = J2|J3, u4 = J2|J4.
  static constexpr int support[4][2] = {{0, 2}, {0, 3}, {1, 2}, {1, 3}};
  for (int i = 0; i < 4; ++i) {
    Point x = z;
    for (int side = 0; side < 2; ++side)
      for (auto idx : js[support[i][side]]) x.flip(idx);
    t.points[i] = std::move(x);
  }
  return t;
}

GoodTuple make_good_tuple(const Point& z, std::uint32_t r, Rng& rng) {
  const std::uint32_t n = z.dimension();
  if (2 * r > n) throw std::invalid_argument("good tuple needs 2r <= n");
  // Uniform 2r-subset, then a uniform partition into four r/2 blocks.
  std::vector<std::uint32_t> all(n);
  for (std::uint32_t i = 0; i < n; ++i) all[i] = i;
  for (std::uint32_t i = 0; i < 2 * r; ++i) {
    std::uint32_t j = i + static_cast<std::uint32_t>(rng.below(n - i));
    std::swap(all[i], all[j]);
  }
  std::array<std::vector<std::uint32_t>, 4> js;
  for (int b = 0; b < 4; ++b)
    js[b].assign(all.begin() + b * (r / 2), all.begin() + (b + 1) * (r / 2));
  return make_good_tuple(z, r, js);
}

bool is_violating(const GoodTuple& tuple, const FunctionOracle& oracle) {
  if (oracle.dimension() != tuple.z.dimension())
    throw std::invalid_argument("tuple/oracle dimension mismatch");
  const bool a = oracle.eval(tuple.points[0]);
  const bool b = oracle.eval(tuple.points[1]);
  const bool c = oracle.eval(tuple.points[2]);
  const bool d = oracle.eval(tuple.points[3]);
  return a == d && b == c && a != b;
}

std::vector<GoodTuple> greedy_disjoint_pack(const std::vector<GoodTuple>& pool) {
  std::vector<GoodTuple> kept;
  std::set<Point> used;
  for (const auto& t : pool) {
    if (!pool.empty() && (t.z != pool[0].z))
      throw std::invalid_argument("greedy_disjoint_pack: mixed centers");
    bool clash = false;
    for (const auto& p : t.points)
      if (used.count(p)) {
        clash = true;
        break;
      }
    if (clash) continue;
    for (const auto& p : t.points) used.insert(p);
    kept.push_back(t);
  }
  return kept;
}

std::vector<GoodTuple> block_family(const Point& z, std::uint32_t r) {
  const std::uint32_t n = z.dimension();
  if (n < 2 * r) throw std::invalid_argument("block_family needs n >= 2r");
  std::vector<GoodTuple> out;
  for (std::uint32_t base = 0; base + 2 * r <= n; base += 2 * r) {
    std::array<std::vector<std::uint32_t>, 4> js;
    for (std::uint32_t b = 0; b < 4; ++b) {
      js[b].resize(r / 2);
      for (std::uint32_t i = 0; i < r / 2; ++i)
        js[b][i] = base + b * (r / 2) + i;
    }
    out.push_back(make_good_tuple(z, r, js));
  }
  return out;
}

RelDistCertificate reldist_lower_cert(const NoSpec& spec,
                                      const std::vector<GoodTuple>& family,
                                      DenominatorMode mode) {
  // Re-verify pairwise disjointness.
  std::set<Point> used;
  for (const auto& t : family)
    for (const auto& p : t.points)
      if (!used.insert(p).second)
        throw std::invalid_argument("certificate family not disjoint");

  RelDistCertificate cert;
  cert.family = family;
  cert.mode = mode;
  NoOracle oracle(spec);
  for (const auto& t : family) {
    const bool v = is_violating(t, oracle);
    cert.violating.push_back(v);
    if (v) ++cert.violating_count;
  }
  if (mode == DenominatorMode::Exact) {
    if (spec.n > 20)
      throw std::invalid_argument("exact denominator limited to n <= 20");
    cert.denominator = static_cast<unsigned long>(
        enumerate_satisfying(oracle).size());
  } else {
    cert.denominator = BallWeightTable(spec.n, spec.r).ball_size();
  }
  cert.bound = mpq_class(mpz_class(cert.violating_count), cert.denominator);
  cert.bound.canonicalize();
  return cert;
}

std::string certificate_to_json(const RelDistCertificate& cert) {
  json j;
  j["denominator_mode"] =
      cert.mode == DenominatorMode::Exact ? "exact" : "upper_bound";
  j["denominator"] = cert.denominator.get_str();
  j["violating_count"] = cert.violating_count;
  j["bound"] = cert.bound.get_num().get_str() + "/" + cert.bound.get_den().get_str();
  json tuples = json::array();
  for (std::size_t i = 0; i < cert.family.size(); ++i) {
    json t;
    t["violating"] = static_cast<bool>(cert.violating[i]);
    json pts = json::array();
    for (const auto& p : cert.family[i].points) pts.push_back(p.to_hex());
    t["points"] = pts;
    tuples.push_back(t);
  }
  j["tuples"] = tuples;
  return j.dump();
}

Point point_from_index(std::uint32_t n, std::uint32_t v) {
  Point p(n);
  for (std::uint32_t j = 0; j < n; ++j)
    if ((v >> j) & 1) p.set(j, true);
  return p;
}

std::uint32_t index_from_point(const Point& p) {
  std::uint32_t v = 0;
  for (std::uint32_t j = 0; j < p.dimension(); ++j)
    if (p.get(j)) v |= 1u << j;
  return v;
}

std::uint32_t truth_table(const FunctionOracle& oracle) {
  const std::uint32_t n = oracle.dimension();
  if (n > 4) throw std::invalid_argument("truth_table limited to n <= 4");
  std::uint32_t table = 0;
  for (std::uint32_t v = 0; v < (1u << n); ++v)
    if (oracle.eval(point_from_index(n, v))) table |= 1u << v;
  return table;
}

std::vector<std::uint32_t> enumerate_ltfs(std::uint32_t n) {
  if (n > 4) throw std::invalid_argument("enumerate_ltfs limited to n <= 4");
  const std::uint32_t points = 1u << n;
  std::vector<Point> domain;
  for (std::uint32_t v = 0; v < points; ++v)
    domain.push_back(point_from_index(n, v));
  std::vector<std::uint32_t> out;
  const std::uint64_t tables = std::uint64_t{1} << points;
  for (std::uint64_t table = 0; table < tables; ++table) {
    LabeledSet set(n);
    for (std::uint32_t v = 0; v < points; ++v)
      set.add(domain[v], (table >> v) & 1);
    if (is_ltf(set).feasible) out.push_back(static_cast<std::uint32_t>(table));
  }
  return out;
}

mpq_class reldist_exact_small(std::uint32_t table, std::uint32_t n,
                              const std::vector<std::uint32_t>& ltfs) {
  const std::uint32_t points = 1u << n;
  if (points < 32 && (table >> points) != 0)
    throw std::invalid_argument("truth table has bits beyond 2^n");
  const int ones = std::popcount(table);
  if (ones == 0)
    throw std::invalid_argument("relative distance undefined for f == 0");
  int best = points + 1;
  for (auto h : ltfs) best = std::min(best, std::popcount(table ^ h));
  mpq_class d(best, ones);
  d.canonicalize();
  return d;
}

mpq_class reldist_exact_small(std::uint32_t table, std::uint32_t n) {
  return reldist_exact_small(table, n, enumerate_ltfs(n));
}

}  // namespace relht
