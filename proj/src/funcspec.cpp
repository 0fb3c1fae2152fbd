#include "relht/funcspec.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>

namespace relht {

using json = nlohmann::json;

namespace {

std::string words_to_hex(const std::vector<std::uint64_t>& words,
                         std::uint64_t nbits) {
  static const char* digits = "0123456789abcdef";
  const std::uint64_t nbytes = (nbits + 7) / 8;
  std::string out(2 * nbytes, '0');
  for (std::uint64_t b = 0; b < nbytes; ++b) {
    std::uint8_t byte =
        static_cast<std::uint8_t>((words[b >> 3] >> ((b & 7) * 8)) & 0xff);
    out[2 * b] = digits[byte >> 4];
    out[2 * b + 1] = digits[byte & 0xf];
  }
  return out;
}

std::vector<std::uint64_t> hex_to_words(const std::string& hex,
                                        std::uint64_t nbits) {
  const std::uint64_t nbytes = (nbits + 7) / 8;
  if (hex.size() != 2 * nbytes)
    throw std::invalid_argument("label bits hex length mismatch");
  std::vector<std::uint64_t> words((nbits + 63) / 64, 0);
  auto val = [](char c) -> std::uint64_t {
    if (c >= '0' && c <= '9') return static_cast<std::uint64_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<std::uint64_t>(c - 'a' + 10);
    throw std::invalid_argument("bad hex digit in label bits");
  };
  for (std::uint64_t b = 0; b < nbytes; ++b) {
    std::uint64_t byte = val(hex[2 * b]) * 16 + val(hex[2 * b + 1]);
    words[b >> 3] |= byte << ((b & 7) * 8);
  }
  return words;
}

std::string u64_to_hex16(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

std::uint64_t hex16_to_u64(const std::string& s) {
  if (s.size() != 16) throw std::invalid_argument("bad 64-bit hex length");
  std::uint64_t v = 0;
  for (char c : s) {
    v <<= 4;
    if (c >= '0' && c <= '9')
      v |= static_cast<std::uint64_t>(c - '0');
    else if (c >= 'a' && c <= 'f')
      v |= static_cast<std::uint64_t>(c - 'a' + 10);
    else
      throw std::invalid_argument("bad hex digit in seed");
  }
  return v;
}

}  // namespace

LabelTable LabelTable::make_explicit(std::uint32_t t,
                                     std::vector<std::uint64_t> bits) {
  if (t > 26) throw std::invalid_argument("explicit label table limited to t <= 26");
  const std::uint64_t nbits = std::uint64_t{1} << t;
  if (bits.size() != (nbits + 63) / 64)
    throw std::invalid_argument("explicit label bit count mismatch");
  LabelTable lt;
  lt.t_ = t;
  lt.keyed_ = false;
  lt.bits_ = std::move(bits);
  return lt;
}

LabelTable LabelTable::make_keyed(std::uint32_t t, std::uint64_t seed_lo,
                                  std::uint64_t seed_hi) {
  if (t > 60) throw std::invalid_argument("keyed label table limited to t <= 60");
  LabelTable lt;
  lt.t_ = t;
  lt.keyed_ = true;
  lt.seed_lo_ = seed_lo;
  lt.seed_hi_ = seed_hi;
  return lt;
}

LabelTable LabelTable::draw_explicit(std::uint32_t t, Rng& rng) {
  const std::uint64_t nbits = std::uint64_t{1} << t;
  std::vector<std::uint64_t> bits((nbits + 63) / 64);
  for (auto& w : bits) w = rng.next_u64();
  if (nbits % 64 != 0) bits.back() &= (std::uint64_t{1} << (nbits % 64)) - 1;
  return make_explicit(t, std::move(bits));
}

bool LabelTable::lookup(std::uint64_t piece) const {
  if (piece >> t_ != 0) throw std::invalid_argument("piece index out of range");
  if (!keyed_) return (bits_[piece >> 6] >> (piece & 63)) & 1;
  std::uint64_t a = seed_hi_ ^ piece;
  std::uint64_t inner = splitmix64(a);
  std::uint64_t b = seed_lo_ ^ inner;
  return splitmix64(b) & 1;
}

bool eval_yes(const BallSpec& spec, const Point& x) {
  return hamming(x, spec.z) <= spec.r;
}

std::uint64_t piece_index(const NoSpec& spec, const Point& x) {
  const Point u = xor_points(x, spec.z);
  if (u.weight() != spec.r)
    throw std::domain_error("piece_index: point is not on Sphere_r(z)");
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < spec.zetas.size(); ++i)
    if (signed_dot(spec.zetas[i], u) >= 0) idx |= std::uint64_t{1} << i;
  return idx;
}

bool eval_no(const NoSpec& spec, const Point& x) {
  const std::uint32_t d = hamming(x, spec.z);
  if (d < spec.r) return true;
  if (d > spec.r) return false;
  return spec.labels.lookup(piece_index(spec, x));
}

Point samp_yes(const BallSpec& spec, const BallWeightTable& table, Rng& rng) {
  return sample_ball(spec.z, table, rng);
}

Point samp_yes(const BallSpec& spec, Rng& rng) {
  BallWeightTable table(spec.n, spec.r);
  return samp_yes(spec, table, rng);
}

namespace {

std::uint64_t default_max_tries(const BallWeightTable& table) {
  // Accept prob >= interior mass + half the sphere mass (labels heuristic).
  mpq_class interior(table.ball_size() - table.binomial(table.r()),
                     table.ball_size());
  mpq_class sphere(table.binomial(table.r()), table.ball_size());
  double p = interior.get_d() + sphere.get_d() / 2.0;
  double expected = 1.0 / p;
  return static_cast<std::uint64_t>(64.0 * expected) + 1;
}

}  // namespace

Point samp_no(const NoSpec& spec, const BallWeightTable& table, Rng& rng,
              std::uint64_t max_tries) {
  if (max_tries == 0) max_tries = default_max_tries(table);
  for (std::uint64_t i = 0; i < max_tries; ++i) {
    Point x = sample_ball(spec.z, table, rng);
    if (eval_no(spec, x)) return x;
  }
  throw SampExhausted(max_tries);
}

Point samp_no(const NoSpec& spec, Rng& rng, std::uint64_t max_tries) {
  BallWeightTable table(spec.n, spec.r);
  return samp_no(spec, table, rng, max_tries);
}

std::vector<Point> enumerate_satisfying(const FunctionOracle& oracle) {
  const std::uint32_t n = oracle.dimension();
  if (n > 20) throw std::invalid_argument("enumerate_satisfying limited to n <= 20");
  std::vector<Point> out;
  // Counter order with coordinate 0 as the most significant position gives
  // lexicographic order on the bit strings.
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
    Point p(n);
    for (std::uint32_t j = 0; j < n; ++j)
      if ((v >> (n - 1 - j)) & 1) p.set(j, true);
    if (oracle.eval(p)) out.push_back(p);
  }
  return out;
}

Point uniform_point(std::uint32_t n, Rng& rng) {
  Point p(n);
  for (auto& w : p.words()) w = rng.next_u64();
  if (n % 64 != 0) p.words().back() &= (std::uint64_t{1} << (n % 64)) - 1;
  return p;
}

BallSpec draw_yes(const Params& params, Rng& rng) {
  return BallSpec{params.n, params.r, uniform_point(params.n, rng)};
}

NoSpec draw_no(const Params& params, Rng& rng) {
  NoSpec spec;
  spec.n = params.n;
  spec.r = params.r;
  spec.z = uniform_point(params.n, rng);
  spec.zetas.reserve(params.t);
  for (std::uint32_t i = 0; i < params.t; ++i)
    spec.zetas.emplace_back(uniform_point(params.n, rng));
  if (params.t <= 26) {
    spec.labels = LabelTable::draw_explicit(params.t, rng);
  } else {
    std::uint64_t lo = rng.next_u64(), hi = rng.next_u64();
    spec.labels = LabelTable::make_keyed(params.t, lo, hi);
  }
  return spec;
}

std::string ball_to_json(const BallSpec& spec) {
  json j;
  j["type"] = "ball";
  j["n"] = spec.n;
  j["r"] = spec.r;
  j["z"] = spec.z.to_hex();
  return j.dump();
}

std::string no_to_json(const NoSpec& spec) {
  json j;
  j["type"] = "no";
  j["n"] = spec.n;
  j["r"] = spec.r;
  j["z"] = spec.z.to_hex();
  json zetas = json::array();
  for (const auto& zeta : spec.zetas) zetas.push_back(zeta.to_hex());
  j["zetas"] = zetas;
  if (spec.labels.is_keyed()) {
    auto seed = spec.labels.seed();
    j["labels"] = {{"mode", "keyed"},
                   {"seed", u64_to_hex16(seed[1]) + u64_to_hex16(seed[0])}};
  } else {
    j["labels"] = {{"mode", "explicit"},
                   {"bits", words_to_hex(spec.labels.raw_bits(),
                                         std::uint64_t{1} << spec.labels.t())}};
  }
  return j.dump();
}

BallSpec ball_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.at("type") != "ball") throw std::invalid_argument("not a ball instance");
  BallSpec spec;
  spec.n = j.at("n").get<std::uint32_t>();
  spec.r = j.at("r").get<std::uint32_t>();
  spec.z = Point::from_hex(spec.n, j.at("z").get<std::string>());
  return spec;
}

NoSpec no_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.at("type") != "no") throw std::invalid_argument("not a no instance");
  NoSpec spec;
  spec.n = j.at("n").get<std::uint32_t>();
  spec.r = j.at("r").get<std::uint32_t>();
  spec.z = Point::from_hex(spec.n, j.at("z").get<std::string>());
  for (const auto& zh : j.at("zetas"))
    spec.zetas.push_back(SignVector::from_hex(spec.n, zh.get<std::string>()));
  const auto& labels = j.at("labels");
  const std::uint32_t t = spec.t();
  if (labels.at("mode") == "keyed") {
    std::string seed = labels.at("seed").get<std::string>();
    if (seed.size() != 32) throw std::invalid_argument("keyed seed must be 128-bit hex");
    spec.labels = LabelTable::make_keyed(t, hex16_to_u64(seed.substr(16)),
                                         hex16_to_u64(seed.substr(0, 16)));
  } else if (labels.at("mode") == "explicit") {
    spec.labels = LabelTable::make_explicit(
        t, hex_to_words(labels.at("bits").get<std::string>(),
                        std::uint64_t{1} << t));
  } else {
    throw std::invalid_argument("unknown label table mode");
  }
  return spec;
}

std::pair<std::optional<BallSpec>, std::optional<NoSpec>> instance_from_json(
    const std::string& text) {
  json j = json::parse(text);
  if (j.at("type") == "ball") return {ball_from_json(text), std::nullopt};
  return {std::nullopt, no_from_json(text)};
}

}  // namespace relht
