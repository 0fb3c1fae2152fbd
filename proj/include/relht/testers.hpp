#pragma once

// Non-adaptive tester harness with budget accounting, the majority-vote
// sphere-probe distinguisher, and the learning-reduction
// (hypothesis-checking) tester.

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "relht/coupling.hpp"
#include "relht/funcspec.hpp"
#include "relht/params.hpp"
#include "relht/rng.hpp"
#include "relht/stats.hpp"

namespace relht {

// A deterministic (query_map, combiner) pair: all q query points are computed
// from the s samples alone, then the combiner sees the q oracle answers.
// Non-adaptivity is structural — query_map never receives answers.
struct NonAdaptiveTester {
  std::uint32_t s = 0;
  std::uint32_t q = 0;
  std::function<std::vector<Point>(const SampleTuple&)> query_map;
  std::function<bool(const SampleTuple&, const std::vector<bool>&)> combiner;
};

struct RunRecord {
  SampleTuple samples;
  std::vector<Point> queries;
  std::vector<bool> answers;
  bool verdict = false;
  std::uint32_t samples_used = 0;   // always == tester.s
  std::uint32_t queries_issued = 0; // always == tester.q
};

// Draws exactly s samples via SAMP, issues exactly q MQ queries, returns the
// combiner verdict. Throws if query_map emits a number of points != q.
RunRecord run_tester(const NonAdaptiveTester& tester,
                     const FunctionOracle& oracle, Rng& rng);

// Coordinatewise majority of the samples, ties broken toward bit 0.
Point center_recover_majority(const SampleTuple& samples);

// Recovers a center estimate by majority over m samples, probes q points of
// Sphere_r(center) derived pseudorandomly from a hash of the samples (the
// tester stays a deterministic map), accepts iff every probe answers 1.
NonAdaptiveTester sphere_probe_distinguisher(const Params& params,
                                             std::uint32_t m, std::uint32_t q);

using Learner =
    std::function<std::shared_ptr<FunctionOracle>(const SampleTuple&)>;

// Ball hypothesis: center = coordinatewise majority, radius = max observed
// distance from that center.
std::shared_ptr<FunctionOracle> ball_hypothesis_learner(
    const SampleTuple& samples);

struct HypothesisCheckRecord {
  bool accept = false;
  std::shared_ptr<FunctionOracle> hypothesis;
  std::uint32_t checks_per_side = 0;  // ceil(c / eps)
  std::uint32_t f_side_passes = 0;    // h = 1 on samples of f
  std::uint32_t h_side_passes = 0;    // f = 1 on samples of h
};

// Learning-reduction tester: learn h from `learn_samples` draws of f, then
// cross-check containment both ways with ceil(c/eps) samples per side.
HypothesisCheckRecord hypothesis_check_tester(const FunctionOracle& f,
                                              const Learner& learner,
                                              double eps,
                                              std::uint32_t learn_samples,
                                              Rng& rng, std::uint32_t c = 8);

struct GapResult {
  WilsonInterval p_yes;
  WilsonInterval p_no;
  double gap = 0.0;  // p_yes - p_no
};

// Accept rate of the tester over fresh yes-instances vs fresh no-instances,
// one derived stream per trial index.
GapResult acceptance_gap(const NonAdaptiveTester& tester, const Params& params,
                         std::uint64_t trials, std::uint64_t master_seed);

}  // namespace relht
