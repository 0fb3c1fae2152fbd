#include "relht/stats.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <stdexcept>

namespace relht {

WilsonInterval wilson(std::uint64_t successes, std::uint64_t trials, double z) {
  if (successes > trials) throw std::invalid_argument("wilson: successes > trials");
  if (trials == 0) return WilsonInterval{0.0, 0.0, 1.0};  // vacuous interval
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  WilsonInterval w;
  w.estimate = p;
  w.low = std::max(0.0, center - half);
  w.high = std::min(1.0, center + half);
  return w;
}

double chi_square_pvalue(double statistic, double dof) {
  if (dof <= 0) throw std::invalid_argument("chi_square_pvalue: dof <= 0");
  if (statistic <= 0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

ChiSquareResult chi_square_gof(const std::vector<std::uint64_t>& observed,
                               const std::vector<double>& expected_weights) {
  if (observed.size() != expected_weights.size() || observed.empty())
    throw std::invalid_argument("chi_square_gof: size mismatch");
  double total_obs = 0.0, total_w = 0.0;
  for (auto o : observed) total_obs += static_cast<double>(o);
  for (auto w : expected_weights) {
    if (w < 0) throw std::invalid_argument("chi_square_gof: negative weight");
    total_w += w;
  }
  if (total_obs == 0 || total_w == 0)
    throw std::invalid_argument("chi_square_gof: empty data");
  ChiSquareResult r;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = expected_weights[i] / total_w * total_obs;
    if (e == 0) {
      if (observed[i] != 0)
        throw std::invalid_argument("chi_square_gof: mass on zero-expectation cell");
      continue;
    }
    const double d = static_cast<double>(observed[i]) - e;
    r.statistic += d * d / e;
  }
  r.dof = static_cast<double>(observed.size() - 1);
  r.pvalue = chi_square_pvalue(r.statistic, r.dof);
  return r;
}

}  // namespace relht
