#include "relht/experiment.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "relht/adversary.hpp"
#include "relht/coupling.hpp"
#include "relht/funcspec.hpp"
#include "relht/ltf.hpp"
#include "relht/sampling.hpp"
#include "relht/stats.hpp"
#include "relht/testers.hpp"

namespace relht {

using json = nlohmann::ordered_json;

const char* const kCodeVersion = "relht 1.0.0";

namespace {

// Stream index reserved for per-experiment shared setup (fixed instances),
// outside the range of trial indices.
constexpr std::uint64_t kSetupStream = ~std::uint64_t{0};

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_safe(std::string text) {
  for (auto& ch : text)
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  return text;
}

json wilson_json(const WilsonInterval& w) {
  return json{{"estimate", w.estimate}, {"low", w.low}, {"high", w.high}};
}

}  // namespace

ExperimentId experiment_from_name(const std::string& name) {
  if (name == "sampler-exactness") return ExperimentId::SamplerExactness;
  if (name == "violating-rate") return ExperimentId::ViolatingRate;
  if (name == "packing-cert") return ExperimentId::PackingCert;
  if (name == "tv-advantage") return ExperimentId::TvAdvantage;
  if (name == "coupling-exactness") return ExperimentId::CouplingExactness;
  if (name == "typicality") return ExperimentId::Typicality;
  if (name == "attack") return ExperimentId::Attack;
  if (name == "distinguisher") return ExperimentId::Distinguisher;
  if (name == "hypothesis-tester") return ExperimentId::HypothesisTester;
  throw std::invalid_argument("unknown experiment id: " + name);
}

std::string experiment_name(ExperimentId id) {
  switch (id) {
    case ExperimentId::SamplerExactness: return "sampler-exactness";
    case ExperimentId::ViolatingRate: return "violating-rate";
    case ExperimentId::PackingCert: return "packing-cert";
    case ExperimentId::TvAdvantage: return "tv-advantage";
    case ExperimentId::CouplingExactness: return "coupling-exactness";
    case ExperimentId::Typicality: return "typicality";
    case ExperimentId::Attack: return "attack";
    case ExperimentId::Distinguisher: return "distinguisher";
    case ExperimentId::HypothesisTester: return "hypothesis-tester";
  }
  throw std::logic_error("unreachable");
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig cfg;
  cfg.id = experiment_from_name(j.at("experiment").get<std::string>());
  const json& p = j.at("params");
  if (p.value("paper_mode", false)) {
    cfg.params = Params::paper_mode(p.at("n").get<std::uint32_t>(),
                                    p.value("log_base", 2.0));
  } else {
    cfg.params = Params::manual(
        p.at("n").get<std::uint32_t>(), p.at("r").get<std::uint32_t>(),
        p.value("s", 1u), p.value("t", 1u), p.value("q", 1u),
        p.value("delta", 0.0), p.value("log_base", 2.0));
  }
  cfg.trials = j.at("trials").get<std::uint64_t>();
  cfg.master_seed = j.value("seed", std::uint64_t{0});
  cfg.threads = j.value("threads", 1u);
  cfg.sampler = j.value("sampler", cfg.sampler);
  cfg.statistic = j.value("statistic", cfg.statistic);
  cfg.kind_a = j.value("kind_a", cfg.kind_a);
  cfg.kind_b = j.value("kind_b", cfg.kind_b);
  cfg.strategy = j.value("strategy", cfg.strategy);
  cfg.t_prime = j.value("t_prime", cfg.t_prime);
  cfg.closeness_threshold = j.value("closeness_threshold", cfg.closeness_threshold);
  cfg.sigma = j.value("sigma", cfg.sigma);
  cfg.sanity = j.value("sanity", cfg.sanity);
  cfg.pool = j.value("pool", cfg.pool);
  cfg.denominator = j.value("denominator", cfg.denominator);
  cfg.m = j.value("m", cfg.m);
  cfg.probes = j.value("probes", cfg.probes);
  cfg.eps = j.value("eps", cfg.eps);
  cfg.c = j.value("c", cfg.c);
  cfg.learn_samples = j.value("learn_samples", cfg.learn_samples);
  return cfg;
}

std::string ExperimentConfig::to_json() const {
  json j;
  j["experiment"] = experiment_name(id);
  j["params"] = {{"n", params.n},     {"delta", params.delta},
                 {"r", params.r},     {"s", params.s},
                 {"t", params.t},     {"q", params.q},
                 {"log_base", params.log_base}};
  j["trials"] = trials;
  j["seed"] = master_seed;
  // threads is an execution detail, deliberately absent: outputs must be
  // byte-identical across thread counts.
  j["sampler"] = sampler;
  j["statistic"] = statistic;
  j["kind_a"] = kind_a;
  j["kind_b"] = kind_b;
  j["strategy"] = strategy;
  j["t_prime"] = t_prime;
  j["closeness_threshold"] = closeness_threshold;
  j["sigma"] = sigma;
  j["sanity"] = sanity;
  j["pool"] = pool;
  j["denominator"] = denominator;
  j["m"] = m;
  j["probes"] = probes;
  j["eps"] = eps;
  j["c"] = c;
  j["learn_samples"] = learn_samples;
  return j.dump(2);
}

void parallel_for(std::uint64_t count, std::uint32_t threads,
                  const std::function<void(std::uint64_t)>& body) {
  if (threads <= 1 || count <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const std::uint32_t k = std::min<std::uint64_t>(threads, count);
  pool.reserve(k);
  for (std::uint32_t i = 0; i < k; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

// One experiment = a CSV schema, a per-trial body, and a summarizer.
struct Plan {
  std::vector<std::string> columns;       // outcome columns
  std::uint64_t row_count = 0;            // may differ from config.trials
  std::function<std::vector<std::string>(std::uint64_t, Rng&)> trial;
  std::function<json(const std::vector<TrialRecord>&)> summarize;
};

std::vector<Point> enumerate_sphere(const Point& z, std::uint32_t r) {
  const std::uint32_t n = z.dimension();
  std::vector<Point> out;
  std::vector<std::uint32_t> pick;
  auto rec = [&](auto&& self, std::uint32_t start) -> void {
    if (pick.size() == r) {
      Point p = z;
      for (auto j : pick) p.flip(j);
      out.push_back(p);
      return;
    }
    for (std::uint32_t j = start; j + (r - pick.size()) <= n; ++j) {
      pick.push_back(j);
      self(self, j + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<Point> enumerate_ball(const Point& z, std::uint32_t r) {
  std::vector<Point> out;
  for (std::uint32_t k = 0; k <= r; ++k) {
    auto sphere = enumerate_sphere(z, k);
    out.insert(out.end(), sphere.begin(), sphere.end());
  }
  return out;
}

json chi_square_against_support(const std::vector<TrialRecord>& records,
                                const std::vector<Point>& support) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < support.size(); ++i)
    index[support[i].to_hex()] = i;
  std::vector<std::uint64_t> observed(support.size(), 0);
  std::uint64_t total = 0;
  for (const auto& rec : records) {
    if (rec.error) continue;
    auto it = index.find(rec.fields[0]);
    if (it == index.end())
      throw std::logic_error("sampler emitted a point outside the support");
    ++observed[it->second];
    ++total;
  }
  std::vector<double> expected(support.size(), 1.0);
  const ChiSquareResult chi = chi_square_gof(observed, expected);
  return json{{"support_size", support.size()},
              {"draws", total},
              {"chi_square", chi.statistic},
              {"dof", chi.dof},
              {"p_value", chi.pvalue}};
}

Plan make_sampler_exactness(const ExperimentConfig& cfg) {
  if (cfg.params.n > 16)
    throw std::invalid_argument("sampler-exactness needs n <= 16 (enumeration)");
  Rng setup = derive_stream(cfg.master_seed, kSetupStream);
  auto spec = std::make_shared<NoSpec>(draw_no(cfg.params, setup));
  const Point z = spec->z;
  const Params params = cfg.params;
  const std::string sampler = cfg.sampler;
  auto table = std::make_shared<BallWeightTable>(params.n, params.r);

  Plan plan;
  plan.columns = {"point"};
  plan.row_count = cfg.trials;
  plan.trial = [=](std::uint64_t, Rng& rng) {
    Point p;
    if (sampler == "sphere")
      p = sample_sphere(z, params.r, rng);
    else if (sampler == "ball")
      p = sample_ball(z, *table, rng);
    else if (sampler == "yes")
      p = samp_yes(BallSpec{params.n, params.r, z}, *table, rng);
    else if (sampler == "no")
      p = samp_no(*spec, *table, rng);
    else
      throw std::invalid_argument("unknown sampler: " + sampler);
    return std::vector<std::string>{p.to_hex()};
  };
  plan.summarize = [=](const std::vector<TrialRecord>& records) {
    std::vector<Point> support;
    if (sampler == "sphere")
      support = enumerate_sphere(z, params.r);
    else if (sampler == "ball" || sampler == "yes")
      support = enumerate_ball(z, params.r);
    else
      support = enumerate_satisfying(NoOracle(*spec));
    json s = chi_square_against_support(records, support);
    s["sampler"] = sampler;
    return s;
  };
  return plan;
}

Plan make_violating_rate(const ExperimentConfig& cfg) {
  const Params params = cfg.params;
  Plan plan;
  plan.columns = {"violating"};
  plan.row_count = cfg.trials;
  plan.trial = [params](std::uint64_t, Rng& rng) {
    NoSpec spec = draw_no(params, rng);
    GoodTuple tuple = make_good_tuple(spec.z, params.r, rng);
    const bool v = is_violating(tuple, NoOracle(std::move(spec)));
    return std::vector<std::string>{v ? "1" : "0"};
  };
  plan.summarize = [](const std::vector<TrialRecord>& records) {
    std::uint64_t hits = 0, total = 0;
    for (const auto& rec : records) {
      if (rec.error) continue;
      hits += rec.fields[0] == "1";
      ++total;
    }
    return json{{"violating_rate", wilson_json(wilson(hits, total))}};
  };
  return plan;
}

Plan make_packing_cert(const ExperimentConfig& cfg) {
  const Params params = cfg.params;
  DenominatorMode mode;
  if (cfg.denominator == "exact")
    mode = DenominatorMode::Exact;
  else if (cfg.denominator == "upper_bound")
    mode = DenominatorMode::UpperBound;
  else if (cfg.denominator == "auto")
    mode = params.n <= 20 ? DenominatorMode::Exact : DenominatorMode::UpperBound;
  else
    throw std::invalid_argument("unknown denominator mode: " + cfg.denominator);
  const std::uint32_t pool_size = cfg.pool;

  Plan plan;
  plan.columns = {"family_size", "violating_count", "bound", "bound_double"};
  plan.row_count = cfg.trials;
  plan.trial = [params, mode, pool_size](std::uint64_t, Rng& rng) {
    NoSpec spec = draw_no(params, rng);
    std::vector<GoodTuple> pool;
    pool.reserve(pool_size);
    for (std::uint32_t i = 0; i < pool_size; ++i)
      pool.push_back(make_good_tuple(spec.z, params.r, rng));
    const auto family = greedy_disjoint_pack(pool);
    const RelDistCertificate cert = reldist_lower_cert(spec, family, mode);
    return std::vector<std::string>{
        std::to_string(family.size()), std::to_string(cert.violating_count),
        cert.bound.get_num().get_str() + "/" + cert.bound.get_den().get_str(),
        fmt_double(cert.bound.get_d())};
  };
  plan.summarize = [mode](const std::vector<TrialRecord>& records) {
    double sum = 0.0, mn = 1e300, mx = -1e300, families = 0.0;
    std::uint64_t total = 0;
    for (const auto& rec : records) {
      if (rec.error) continue;
      const double b = std::strtod(rec.fields[3].c_str(), nullptr);
      sum += b;
      mn = std::min(mn, b);
      mx = std::max(mx, b);
      families += std::strtod(rec.fields[0].c_str(), nullptr);
      ++total;
    }
    if (total == 0) return json{{"mean_bound", nullptr}};
    return json{{"denominator_mode",
                 mode == DenominatorMode::Exact ? "exact" : "upper_bound"},
                {"mean_bound", sum / total},
                {"min_bound", mn},
                {"max_bound", mx},
                {"mean_family_size", families / total}};
  };
  return plan;
}

TupleKind kind_from_name(const std::string& name) {
  if (name == "sphere") return TupleKind::Sphere;
  if (name == "ball") return TupleKind::Ball;
  if (name == "no") return TupleKind::No;
  throw std::invalid_argument("unknown tuple kind: " + name);
}

Plan make_tv_advantage(const ExperimentConfig& cfg) {
  const Params params = cfg.params;
  const TupleStatistic stat = statistic_from_name(cfg.statistic);
  const TupleKind ka = kind_from_name(cfg.kind_a);
  const TupleKind kb = kind_from_name(cfg.kind_b);
  const std::uint64_t per_side = cfg.trials;

  Plan plan;
  plan.columns = {"side", "value"};
  plan.row_count = 2 * per_side;
  plan.trial = [=](std::uint64_t index, Rng& rng) {
    const bool side_a = index < per_side;
    const TupleKind kind = side_a ? ka : kb;
    SampleTuple tuple;
    if (kind == TupleKind::No) {
      NoSpec spec = draw_no(params, rng);
      tuple = draw_tuple(kind, spec.z, params, rng, &spec);
    } else {
      const Point z = uniform_point(params.n, rng);
      tuple = draw_tuple(kind, z, params, rng);
    }
    const std::int64_t value = evaluate_statistic(stat, tuple, params.r);
    return std::vector<std::string>{side_a ? "a" : "b", std::to_string(value)};
  };
  plan.summarize = [=](const std::vector<TrialRecord>& records) {
    std::vector<std::int64_t> va, vb;
    for (const auto& rec : records) {
      if (rec.error) continue;
      (rec.fields[0] == "a" ? va : vb)
          .push_back(std::strtoll(rec.fields[1].c_str(), nullptr, 10));
    }
    if (va.size() != vb.size())
      throw std::logic_error("tv-advantage: unbalanced sides after errors");
    const AdvantageResult adv = advantage_from_values(std::move(va), std::move(vb));
    return json{{"statistic", statistic_name(stat)},
                {"advantage", adv.advantage},
                {"best_threshold", adv.best_threshold},
                {"tail_prob_a", wilson_json(adv.ci_a)},
                {"tail_prob_b", wilson_json(adv.ci_b)}};
  };
  return plan;
}

Plan make_coupling_exactness(const ExperimentConfig& cfg) {
  const Params params = cfg.params;
  Rng setup = derive_stream(cfg.master_seed, kSetupStream);
  auto spec = std::make_shared<NoSpec>(draw_no(params, setup));

  Plan plan;
  plan.columns = {"v_nil", "w_nil", "v_star"};
  plan.row_count = cfg.trials;
  plan.trial = [=](std::uint64_t, Rng& rng) {
    const CoupledDraw cd = coupled_draw(spec->z, params, *spec, rng);
    std::string v = "nil";
    if (cd.v_star) {
      v.clear();
      for (const auto& p : cd.v_star->points) {
        if (!v.empty()) v += ':';
        v += p.to_hex();
      }
    }
    return std::vector<std::string>{cd.v_star ? "0" : "1",
                                    cd.w_star ? "0" : "1", v};
  };
  plan.summarize = [params](const std::vector<TrialRecord>& records) {
    std::uint64_t v_nil = 0, w_nil = 0, total = 0;
    for (const auto& rec : records) {
      if (rec.error) continue;
      v_nil += rec.fields[0] == "1";
      w_nil += rec.fields[1] == "1";
      ++total;
    }
    // Exact Pr[Bin(3s, 1/2) < s].
    const std::uint32_t m = 3 * params.s;
    mpz_class below = 0, binom = 1;
    for (std::uint32_t k = 0; k < params.s; ++k) {
      below += binom;
      binom = binom * (m - k) / (k + 1);
    }
    mpq_class tail(below, mpz_class(1) << m);
    tail.canonicalize();
    const double p = tail.get_d();
    const double obs = total ? static_cast<double>(v_nil) / total : 0.0;
    const double sd = std::sqrt(p * (1 - p) / std::max<std::uint64_t>(total, 1));
    return json{{"v_nil_rate", wilson_json(wilson(v_nil, total))},
                {"w_nil_rate", wilson_json(wilson(w_nil, total))},
                {"exact_v_nil_prob",
                 tail.get_num().get_str() + "/" + tail.get_den().get_str()},
                {"exact_v_nil_prob_double", p},
                {"v_nil_z_score", sd > 0 ? (obs - p) / sd : 0.0}};
  };
  return plan;
}

Plan make_typicality(const ExperimentConfig& cfg) {
  const Params params = cfg.params;
  const double sigma = cfg.sigma;
  Plan plan;
  plan.columns = {"good"};
  plan.row_count = cfg.trials;
  plan.trial = [params, sigma](std::uint64_t, Rng& rng) {
    auto [z, u] = joint_draw(params, rng);
    const bool good = check_good(z, u, params, sigma).pass;
    return std::vector<std::string>{good ? "1" : "0"};
  };
  plan.summarize = [params, sigma](const std::vector<TrialRecord>& records) {
    std::uint64_t good = 0, total = 0;
    for (const auto& rec : records) {
      if (rec.error) continue;
      good += rec.fields[0] == "1";
      ++total;
    }
    return json{{"sigma", sigma},
                {"slack", std::pow(static_cast<double>(params.n), sigma)},
                {"good_rate", wilson_json(wilson(good, total))}};
  };
  return plan;
}

Plan make_attack(const ExperimentConfig& cfg) {
  const Params params = cfg.params;
  const AttackStrategy strategy = strategy_from_name(cfg.strategy);
  if (strategy == AttackStrategy::Clairvoyant && !cfg.sanity)
    throw std::invalid_argument(
        "clairvoyant strategy is diagnostic-only; set \"sanity\": true");
  const std::uint32_t t_prime = cfg.t_prime;
  const std::uint32_t threshold = cfg.closeness_threshold;
  const double sigma = cfg.sigma;

  Plan plan;
  plan.columns = {"hit", "good", "strategy_failure"};
  plan.row_count = cfg.trials;
  plan.trial = [=](std::uint64_t, Rng& rng) {
    auto [z, u] = joint_draw(params, rng);
    const bool good = check_good(z, u, params, sigma).pass;
    bool hit = false, failure = false;
    try {
      const Point y =
          attack(strategy, u, t_prime, rng,
                 strategy == AttackStrategy::Clairvoyant ? &z : nullptr);
      hit = (hamming(y, z) == params.r);
      for (std::uint32_t i = 0; i < u.s() && hit; ++i)
        hit = (hamming(y, u.points[i]) >= threshold);
    } catch (const StrategyExhausted&) {
      failure = true;  // a strategy that cannot move cannot hit
    }
    return std::vector<std::string>{hit ? "1" : "0", good ? "1" : "0",
                                    failure ? "1" : "0"};
  };
  plan.summarize = [=](const std::vector<TrialRecord>& records) {
    std::uint64_t hits = 0, good = 0, failures = 0, total = 0;
    for (const auto& rec : records) {
      if (rec.error) continue;
      hits += rec.fields[0] == "1";
      good += rec.fields[1] == "1";
      failures += rec.fields[2] == "1";
      ++total;
    }
    return json{{"strategy", strategy_name(strategy)},
                {"t_prime", t_prime},
                {"closeness_threshold", threshold},
                {"hit_rate", wilson_json(wilson(hits, total))},
                {"good_rate", wilson_json(wilson(good, total))},
                {"strategy_failures", failures}};
  };
  return plan;
}

Plan make_distinguisher(const ExperimentConfig& cfg) {
  const Params params = cfg.params;
  auto tester = std::make_shared<NonAdaptiveTester>(
      sphere_probe_distinguisher(params, cfg.m, cfg.probes));

  Plan plan;
  plan.columns = {"yes_accept", "no_accept"};
  plan.row_count = cfg.trials;
  plan.trial = [=](std::uint64_t, Rng& rng) {
    BallOracle yes(draw_yes(params, rng));
    const bool ya = run_tester(*tester, yes, rng).verdict;
    NoOracle no(draw_no(params, rng));
    const bool na = run_tester(*tester, no, rng).verdict;
    return std::vector<std::string>{ya ? "1" : "0", na ? "1" : "0"};
  };
  plan.summarize = [=](const std::vector<TrialRecord>& records) {
    std::uint64_t yes = 0, no = 0, total = 0;
    for (const auto& rec : records) {
      if (rec.error) continue;
      yes += rec.fields[0] == "1";
      no += rec.fields[1] == "1";
      ++total;
    }
    const WilsonInterval py = wilson(yes, total), pn = wilson(no, total);
    return json{{"m", cfg.m},
                {"probes", cfg.probes},
                {"p_yes", wilson_json(py)},
                {"p_no", wilson_json(pn)},
                {"gap", py.estimate - pn.estimate}};
  };
  return plan;
}

Plan make_hypothesis_tester(const ExperimentConfig& cfg) {
  const Params params = cfg.params;
  const double eps = cfg.eps;
  const std::uint32_t c = cfg.c, learn = cfg.learn_samples;

  Plan plan;
  plan.columns = {"yes_accept", "no_accept"};
  plan.row_count = cfg.trials;
  plan.trial = [=](std::uint64_t, Rng& rng) {
    BallOracle yes(draw_yes(params, rng));
    const bool ya =
        hypothesis_check_tester(yes, ball_hypothesis_learner, eps, learn, rng, c)
            .accept;
    NoOracle no(draw_no(params, rng));
    const bool na =
        hypothesis_check_tester(no, ball_hypothesis_learner, eps, learn, rng, c)
            .accept;
    return std::vector<std::string>{ya ? "1" : "0", na ? "1" : "0"};
  };
  plan.summarize = [=](const std::vector<TrialRecord>& records) {
    std::uint64_t yes = 0, no = 0, total = 0;
    for (const auto& rec : records) {
      if (rec.error) continue;
      yes += rec.fields[0] == "1";
      no += rec.fields[1] == "1";
      ++total;
    }
    const WilsonInterval py = wilson(yes, total), pn = wilson(no, total);
    return json{{"eps", eps},
                {"c", c},
                {"learn_samples", learn},
                {"p_yes", wilson_json(py)},
                {"p_no", wilson_json(pn)},
                {"gap", py.estimate - pn.estimate}};
  };
  return plan;
}

Plan make_plan(const ExperimentConfig& cfg) {
  switch (cfg.id) {
    case ExperimentId::SamplerExactness: return make_sampler_exactness(cfg);
    case ExperimentId::ViolatingRate: return make_violating_rate(cfg);
    case ExperimentId::PackingCert: return make_packing_cert(cfg);
    case ExperimentId::TvAdvantage: return make_tv_advantage(cfg);
    case ExperimentId::CouplingExactness: return make_coupling_exactness(cfg);
    case ExperimentId::Typicality: return make_typicality(cfg);
    case ExperimentId::Attack: return make_attack(cfg);
    case ExperimentId::Distinguisher: return make_distinguisher(cfg);
    case ExperimentId::HypothesisTester: return make_hypothesis_tester(cfg);
  }
  throw std::logic_error("unreachable");
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  config.params.validate();
  const Plan plan = make_plan(config);

  ExperimentOutput out;
  out.records.resize(plan.row_count);
  parallel_for(plan.row_count, config.threads, [&](std::uint64_t index) {
    const auto start = std::chrono::steady_clock::now();
    TrialRecord& rec = out.records[index];
    rec.index = index;
    Rng rng = derive_stream(config.master_seed, index);
    try {
      rec.fields = plan.trial(index, rng);
      if (rec.fields.size() != plan.columns.size())
        throw std::logic_error("trial emitted wrong column count");
    } catch (const std::exception& e) {
      rec.error = true;
      rec.error_message = e.what();
      rec.fields.assign(plan.columns.size(), "");
    }
    rec.wall_time_ns = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now() - start)
            .count());
  });

  std::ostringstream csv;
  csv << "trial";
  for (const auto& col : plan.columns) csv << ',' << col;
  csv << ",error\n";
  for (const auto& rec : out.records) {
    csv << rec.index;
    for (const auto& f : rec.fields) csv << ',' << csv_safe(f);
    csv << ',' << csv_safe(rec.error_message) << '\n';
    out.error_count += rec.error;
  }
  out.csv = csv.str();

  json summary;
  summary["experiment"] = experiment_name(config.id);
  summary["code_version"] = kCodeVersion;
  summary["config"] = json::parse(config.to_json());
  summary["rows"] = plan.row_count;
  summary["errors"] = out.error_count;
  summary["summary"] = plan.summarize(out.records);
  out.summary_json = summary.dump(2) + "\n";
  return out;
}

}  // namespace relht
