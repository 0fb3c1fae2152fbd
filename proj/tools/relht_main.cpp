// relht — command-line front end: instance generation, oracle access, LTF
// certificates, and the seeded experiment runners.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "relht/adversary.hpp"
#include "relht/coupling.hpp"
#include "relht/experiment.hpp"
#include "relht/funcspec.hpp"
#include "relht/ltf.hpp"
#include "relht/params.hpp"
#include "relht/testers.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace relht;

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitTrialErrors = 3;

struct GlobalOpts {
  std::uint64_t seed = 0;
  std::uint32_t threads = 1;
  std::string out_dir;
  std::string params_spec;      // "n=...,r=...,s=...,t=...,q=...,delta=..."
  std::string paper_mode_spec;  // "n=..."
};

std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("expected key=value, got '" + item + "'");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return kv;
}

Params params_from_opts(const GlobalOpts& g) {
  if (!g.paper_mode_spec.empty()) {
    auto kv = parse_kv(g.paper_mode_spec);
    return Params::paper_mode(std::stoul(kv.at("n")));
  }
  if (g.params_spec.empty())
    throw std::invalid_argument("missing --params or --paper-mode");
  auto kv = parse_kv(g.params_spec);
  auto get_u = [&](const char* key, std::uint32_t fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback
                          : static_cast<std::uint32_t>(std::stoul(it->second));
  };
  const double delta = kv.count("delta") ? std::stod(kv.at("delta")) : 0.0;
  return Params::manual(get_u("n", 0), get_u("r", 0), get_u("s", 1),
                        get_u("t", 1), get_u("q", 1), delta);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw std::runtime_error("cannot write " + path);
  outf << content;
}

// Emit to <out>/<name> when --out was given, else to stdout.
void emit(const GlobalOpts& g, const std::string& name,
          const std::string& content) {
  if (g.out_dir.empty()) {
    std::cout << content;
    if (content.empty() || content.back() != '\n') std::cout << '\n';
    return;
  }
  std::filesystem::create_directories(g.out_dir);
  write_file((std::filesystem::path(g.out_dir) / name).string(), content);
}

std::unique_ptr<FunctionOracle> oracle_from_file(const std::string& path) {
  auto [ball, no] = instance_from_json(read_file(path));
  if (ball) return std::make_unique<BallOracle>(*ball);
  return std::make_unique<NoOracle>(*no);
}

int run_and_emit(const GlobalOpts& g, ExperimentConfig cfg) {
  cfg.master_seed = g.seed;
  cfg.threads = g.threads;
  const ExperimentOutput out = run_experiment(cfg);
  const std::string stem = experiment_name(cfg.id);
  if (!g.out_dir.empty()) {
    std::filesystem::create_directories(g.out_dir);
    write_file((std::filesystem::path(g.out_dir) / (stem + ".csv")).string(),
               out.csv);
    write_file((std::filesystem::path(g.out_dir) / (stem + ".json")).string(),
               out.summary_json);
  }
  std::cout << out.summary_json;
  return out.error_count > 0 ? kExitTrialErrors : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relht: relative-error halfspace-testing laboratory"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalOpts g;
  app.add_option("--seed", g.seed, "64-bit master seed");
  app.add_option("--threads", g.threads, "worker thread count");
  app.add_option("--out", g.out_dir, "output directory");
  app.add_option("--params", g.params_spec,
                 "manual parameters: n=...,r=...,s=...,t=...,q=...,delta=...");
  app.add_option("--paper-mode", g.paper_mode_spec,
                 "derive parameters from n=... alone");

  // Instance generation / oracle access.
  auto* gen_yes = app.add_subcommand("gen-yes", "draw a yes-instance (ball)");
  auto* gen_no = app.add_subcommand("gen-no", "draw a no-instance");
  auto* eval_cmd = app.add_subcommand("eval", "evaluate an instance at a point");
  std::string instance_path, point_hex;
  eval_cmd->add_option("--instance", instance_path, "instance JSON file")
      ->required();
  eval_cmd->add_option("--point", point_hex, "point as hex")->required();
  auto* sample_cmd =
      app.add_subcommand("sample", "draw satisfying assignments");
  std::string sample_instance;
  std::uint64_t sample_count = 1;
  sample_cmd->add_option("--instance", sample_instance, "instance JSON file")
      ->required();
  sample_cmd->add_option("--count", sample_count, "number of draws");

  // LTF machinery.
  auto* ltf_cmd = app.add_subcommand(
      "ltf-check", "exact LTF feasibility of '<hex> <0|1>' lines");
  std::string labels_path;
  ltf_cmd->add_option("--labels", labels_path, "labeled-points file")
      ->required();
  std::uint32_t ltf_n = 0;
  ltf_cmd->add_option("--n", ltf_n, "dimension")->required();

  auto* certify_cmd = app.add_subcommand(
      "certify", "relative-distance lower-bound certificate for a no-instance");
  std::string certify_instance, certify_denominator = "auto";
  std::uint32_t certify_pool = 500;
  certify_cmd->add_option("--instance", certify_instance, "no-instance JSON")
      ->required();
  certify_cmd->add_option("--pool", certify_pool, "random tuple pool size");
  certify_cmd->add_option("--denominator", certify_denominator,
                          "exact | upper_bound | auto");

  auto* reldist_cmd = app.add_subcommand(
      "reldist-exact", "exact relative distance to the nearest LTF (n <= 4)");
  std::uint32_t reldist_n = 0;
  std::uint64_t reldist_table = 0;
  reldist_cmd->add_option("--n", reldist_n, "dimension (<= 4)")->required();
  reldist_cmd->add_option("--table", reldist_table,
                          "truth table as integer, bit v = f(point v)")
      ->required();

  // Experiment runners.
  std::uint64_t trials = 1000;
  for (auto* cmd : {gen_yes, gen_no}) (void)cmd;

  auto* tv_cmd = app.add_subcommand("tv", "discriminator-advantage experiment");
  std::string tv_stat = "S2", tv_kind_a = "ball", tv_kind_b = "no";
  tv_cmd->add_option("--trials", trials, "trials per side");
  tv_cmd->add_option("--statistic", tv_stat, "S1 | S2 | S3");
  tv_cmd->add_option("--kind-a", tv_kind_a, "sphere | ball | no");
  tv_cmd->add_option("--kind-b", tv_kind_b, "sphere | ball | no");

  auto* typ_cmd = app.add_subcommand("typicality", "good(z,U) frequency");
  double sigma = 0.51;
  typ_cmd->add_option("--trials", trials, "trial count");
  typ_cmd->add_option("--sigma", sigma, "slack exponent");

  auto* attack_cmd = app.add_subcommand("attack", "query-attack hit rate");
  std::string strategy = "random_flip";
  std::uint32_t t_prime = 64, threshold = 32;
  bool sanity = false;
  attack_cmd->add_option("--trials", trials, "trial count");
  attack_cmd->add_option("--strategy", strategy,
                         "consistent_flip | toward_away | random_flip | clairvoyant");
  attack_cmd->add_option("--t-prime", t_prime, "flip count (even)");
  attack_cmd->add_option("--threshold", threshold, "closeness threshold");
  attack_cmd->add_flag("--sanity", sanity, "allow the clairvoyant strategy");
  attack_cmd->add_option("--sigma", sigma, "slack exponent");

  auto* dist_cmd =
      app.add_subcommand("distinguish", "majority + sphere-probe distinguisher");
  std::uint32_t dist_m = 1200, dist_probes = 100;
  dist_cmd->add_option("--trials", trials, "trials per side");
  dist_cmd->add_option("--m", dist_m, "sample count");
  dist_cmd->add_option("--probes", dist_probes, "probe count");

  auto* learn_cmd =
      app.add_subcommand("learn-test", "learning-reduction tester");
  double eps = 0.5;
  std::uint32_t learn_c = 8, learn_samples = 64;
  learn_cmd->add_option("--trials", trials, "trials per side");
  learn_cmd->add_option("--eps", eps, "closeness parameter");
  learn_cmd->add_option("--c", learn_c, "checks constant");
  learn_cmd->add_option("--learn-samples", learn_samples, "learning samples");

  auto* run_cmd = app.add_subcommand("run", "run an experiment config file");
  std::string config_path;
  run_cmd->add_option("config", config_path, "config JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (gen_yes->parsed()) {
      Rng rng(g.seed);
      emit(g, "yes.json", ball_to_json(draw_yes(params_from_opts(g), rng)));
      return kExitOk;
    }
    if (gen_no->parsed()) {
      Rng rng(g.seed);
      emit(g, "no.json", no_to_json(draw_no(params_from_opts(g), rng)));
      return kExitOk;
    }
    if (eval_cmd->parsed()) {
      auto oracle = oracle_from_file(instance_path);
      const Point x = Point::from_hex(oracle->dimension(), point_hex);
      std::cout << (oracle->eval(x) ? 1 : 0) << "\n";
      return kExitOk;
    }
    if (sample_cmd->parsed()) {
      auto oracle = oracle_from_file(sample_instance);
      std::ostringstream lines;
      for (std::uint64_t i = 0; i < sample_count; ++i) {
        Rng rng = derive_stream(g.seed, i);
        lines << oracle->samp(rng).to_hex() << "\n";
      }
      emit(g, "samples.txt", lines.str());
      return kExitOk;
    }
    if (ltf_cmd->parsed()) {
      LabeledSet set(ltf_n);
      std::istringstream in(read_file(labels_path));
      std::string hex;
      int label;
      while (in >> hex >> label) set.add(Point::from_hex(ltf_n, hex), label != 0);
      const LtfWitness w = is_ltf(set);
      json out;
      out["feasible"] = w.feasible;
      if (w.feasible) {
        json weights = json::array();
        for (const auto& wi : w.weights)
          weights.push_back(wi.get_num().get_str() + "/" + wi.get_den().get_str());
        out["weights"] = weights;
        out["theta"] = w.theta.get_num().get_str() + "/" + w.theta.get_den().get_str();
      } else {
        json ray = json::array();
        for (const auto& [idx, y] : w.certificate)
          ray.push_back(json{{"point_index", idx},
                             {"y", y.get_num().get_str() + "/" + y.get_den().get_str()}});
        out["farkas_ray"] = ray;
      }
      emit(g, "ltf-check.json", out.dump(2) + "\n");
      return kExitOk;
    }
    if (certify_cmd->parsed()) {
      const NoSpec spec = no_from_json(read_file(certify_instance));
      DenominatorMode mode =
          certify_denominator == "exact" ? DenominatorMode::Exact
          : certify_denominator == "upper_bound"
              ? DenominatorMode::UpperBound
              : (spec.n <= 20 ? DenominatorMode::Exact
                              : DenominatorMode::UpperBound);
      Rng rng(g.seed);
      std::vector<GoodTuple> pool;
      pool.reserve(certify_pool);
      for (std::uint32_t i = 0; i < certify_pool; ++i)
        pool.push_back(make_good_tuple(spec.z, spec.r, rng));
      const auto family = greedy_disjoint_pack(pool);
      emit(g, "certificate.json",
           certificate_to_json(reldist_lower_cert(spec, family, mode)) + "\n");
      return kExitOk;
    }
    if (reldist_cmd->parsed()) {
      const mpq_class d = reldist_exact_small(
          static_cast<std::uint32_t>(reldist_table), reldist_n);
      std::cout << d.get_num().get_str() << "/" << d.get_den().get_str() << "\n";
      return kExitOk;
    }

    ExperimentConfig cfg;
    if (tv_cmd->parsed()) {
      cfg.id = ExperimentId::TvAdvantage;
      cfg.statistic = tv_stat;
      cfg.kind_a = tv_kind_a;
      cfg.kind_b = tv_kind_b;
    } else if (typ_cmd->parsed()) {
      cfg.id = ExperimentId::Typicality;
      cfg.sigma = sigma;
    } else if (attack_cmd->parsed()) {
      cfg.id = ExperimentId::Attack;
      cfg.strategy = strategy;
      cfg.t_prime = t_prime;
      cfg.closeness_threshold = threshold;
      cfg.sanity = sanity;
      cfg.sigma = sigma;
    } else if (dist_cmd->parsed()) {
      cfg.id = ExperimentId::Distinguisher;
      cfg.m = dist_m;
      cfg.probes = dist_probes;
    } else if (learn_cmd->parsed()) {
      cfg.id = ExperimentId::HypothesisTester;
      cfg.eps = eps;
      cfg.c = learn_c;
      cfg.learn_samples = learn_samples;
    } else if (run_cmd->parsed()) {
      ExperimentConfig file_cfg = ExperimentConfig::from_json(read_file(config_path));
      // Command-line seed/threads take effect only if explicitly given.
      if (app.count("--seed") == 0) g.seed = file_cfg.master_seed;
      if (app.count("--threads") == 0) g.threads = file_cfg.threads;
      return run_and_emit(g, file_cfg);
    } else {
      throw std::invalid_argument("no subcommand");
    }
    cfg.params = params_from_opts(g);
    cfg.trials = trials;
    return run_and_emit(g, cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTrialErrors;
  }
}
