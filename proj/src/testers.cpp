#include "relht/testers.hpp"

#include <cmath>
#include <stdexcept>

#include "relht/sampling.hpp"

namespace relht {

RunRecord run_tester(const NonAdaptiveTester& tester,
                     const FunctionOracle& oracle, Rng& rng) {
  if (!tester.combiner) throw std::invalid_argument("tester has no combiner");
  RunRecord record;
  record.samples.points.reserve(tester.s);
  for (std::uint32_t i = 0; i < tester.s; ++i)
    record.samples.points.push_back(oracle.samp(rng));
  record.samples_used = tester.s;
  if (tester.q > 0) {
    if (!tester.query_map)
      throw std::invalid_argument("tester has q > 0 but no query_map");
    record.queries = tester.query_map(record.samples);
    if (record.queries.size() != tester.q)
      throw std::logic_error("query_map emitted a number of points != q");
    record.answers.reserve(tester.q);
    for (const auto& p : record.queries)
      record.answers.push_back(oracle.eval(p));
  }
  record.queries_issued = tester.q;
  record.verdict = tester.combiner(record.samples, record.answers);
  return record;
}

Point center_recover_majority(const SampleTuple& samples) {
  return coordinatewise_majority(samples);
}

namespace {

// Deterministic digest of a sample tuple, used to seed the probe stream so
// the query map remains a pure function of the samples.
std::uint64_t tuple_digest(const SampleTuple& samples) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (const auto& p : samples.points) {
    std::uint64_t sm = h ^ p.dimension();
    h = splitmix64(sm);
    for (auto w : p.words()) {
      sm = h ^ w;
      h = splitmix64(sm);
    }
  }
  return h;
}

}  // namespace

NonAdaptiveTester sphere_probe_distinguisher(const Params& params,
                                             std::uint32_t m, std::uint32_t q) {
  if (m < 1 || q < 1)
    throw std::invalid_argument("sphere_probe_distinguisher: m, q >= 1");
  NonAdaptiveTester tester;
  tester.s = m;
  tester.q = q;
  const std::uint32_t r = params.r;
  tester.query_map = [r, q](const SampleTuple& samples) {
    const Point center = center_recover_majority(samples);
    Rng probe_rng(tuple_digest(samples));
    std::vector<Point> probes;
    probes.reserve(q);
    for (std::uint32_t i = 0; i < q; ++i)
      probes.push_back(sample_sphere(center, r, probe_rng));
    return probes;
  };
  tester.combiner = [](const SampleTuple&, const std::vector<bool>& answers) {
    for (bool a : answers)
      if (!a) return false;
    return true;
  };
  return tester;
}

std::shared_ptr<FunctionOracle> ball_hypothesis_learner(
    const SampleTuple& samples) {
  if (samples.points.empty())
    throw std::invalid_argument("ball_hypothesis_learner: no samples");
  const Point center = center_recover_majority(samples);
  std::uint32_t radius = 0;
  for (const auto& p : samples.points)
    radius = std::max(radius, hamming(p, center));
  return std::make_shared<BallOracle>(
      BallSpec{samples.dimension(), radius, center});
}

HypothesisCheckRecord hypothesis_check_tester(const FunctionOracle& f,
                                              const Learner& learner,
                                              double eps,
                                              std::uint32_t learn_samples,
                                              Rng& rng, std::uint32_t c) {
  if (eps <= 0 || eps > 1)
    throw std::invalid_argument("hypothesis_check_tester: eps in (0, 1]");
  if (learn_samples == 0)
    throw std::invalid_argument("hypothesis_check_tester: need samples");
  SampleTuple samples;
  samples.points.reserve(learn_samples);
  for (std::uint32_t i = 0; i < learn_samples; ++i)
    samples.points.push_back(f.samp(rng));
  HypothesisCheckRecord record;
  record.hypothesis = learner(samples);
  if (!record.hypothesis) throw std::runtime_error("learner returned no hypothesis");
  if (record.hypothesis->dimension() != f.dimension())
    throw std::runtime_error("learner hypothesis dimension mismatch");
  record.checks_per_side =
      static_cast<std::uint32_t>(std::ceil(static_cast<double>(c) / eps));
  for (std::uint32_t i = 0; i < record.checks_per_side; ++i)
    record.f_side_passes += record.hypothesis->eval(f.samp(rng));
  for (std::uint32_t i = 0; i < record.checks_per_side; ++i)
    record.h_side_passes += f.eval(record.hypothesis->samp(rng));
  record.accept = record.f_side_passes == record.checks_per_side &&
                  record.h_side_passes == record.checks_per_side;
  return record;
}

GapResult acceptance_gap(const NonAdaptiveTester& tester, const Params& params,
                         std::uint64_t trials, std::uint64_t master_seed) {
  if (trials < 100) throw std::invalid_argument("acceptance_gap: trials < 100");
  std::uint64_t yes_accepts = 0, no_accepts = 0;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    Rng yes_rng = derive_stream(master_seed, 2 * trial);
    BallOracle yes(draw_yes(params, yes_rng));
    yes_accepts += run_tester(tester, yes, yes_rng).verdict;
    Rng no_rng = derive_stream(master_seed, 2 * trial + 1);
    NoOracle no(draw_no(params, no_rng));
    no_accepts += run_tester(tester, no, no_rng).verdict;
  }
  GapResult result;
  result.p_yes = wilson(yes_accepts, trials);
  result.p_no = wilson(no_accepts, trials);
  result.gap = result.p_yes.estimate - result.p_no.estimate;
  return result;
}

}  // namespace relht
