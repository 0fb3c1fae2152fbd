#include "relht/params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relht {

std::uint32_t round_to_even_radius(double x) {
  auto r = static_cast<std::uint32_t>(std::floor(x));
  if (r % 2 == 1) --r;
  return std::max<std::uint32_t>(r, 2);
}

Params Params::manual(std::uint32_t n, std::uint32_t r, std::uint32_t s,
                      std::uint32_t t, std::uint32_t q, double delta,
                      double log_base) {
  Params p;
  p.n = n;
  p.r = r;
  p.s = s;
  p.t = t;
  p.q = q;
  p.delta = delta > 0 ? delta : static_cast<double>(r) / n;
  p.log_base = log_base;
  p.validate();
  return p;
}

Params Params::paper_mode(std::uint32_t n, double log_base) {
  if (n < 4) throw std::invalid_argument("paper_mode requires n >= 4");
  const double lg = std::log(static_cast<double>(n)) / std::log(log_base);
  Params p;
  p.n = n;
  p.log_base = log_base;
  p.delta = 1.0 / (lg * lg);
  p.r = round_to_even_radius(p.delta * n);
  const double s_raw = 0.05 * lg / (std::log(lg) / std::log(log_base));
  p.s = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::lround(s_raw)));
  const double t_raw = 10.0 * std::log(static_cast<double>(p.s)) / std::log(log_base);
  p.t = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::lround(t_raw)));
  const double q_raw = std::pow(static_cast<double>(n), 0.01);
  p.q = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::lround(q_raw)));
  p.validate();
  return p;
}

void Params::validate() const {
  if (n < 1) throw std::invalid_argument("n >= 1 required");
  if (r < 2 || r % 2 != 0) throw std::invalid_argument("r must be even and >= 2");
  if (2 * r > n) throw std::invalid_argument("r <= n/2 required");
  if (!(delta > 0.0 && delta < 0.5))
    throw std::invalid_argument("0 < delta < 1/2 required");
  if (s < 1 || t < 1 || q < 1)
    throw std::invalid_argument("s, t, q >= 1 required");
}

}  // namespace relht
