#pragma once

#include <cstdint>
#include <vector>

namespace relht {

struct WilsonInterval {
  double estimate = 0.0;
  double low = 0.0;
  double high = 0.0;
};

// 95% Wilson score interval unless another z is given.
WilsonInterval wilson(std::uint64_t successes, std::uint64_t trials,
                      double z = 1.959963984540054);

// Upper-tail p-value of the chi-square distribution.
double chi_square_pvalue(double statistic, double dof);

// Pearson chi-square of observed counts against expected counts
// (expected need not be normalized; it is scaled to the observed total).
struct ChiSquareResult {
  double statistic = 0.0;
  double dof = 0.0;
  double pvalue = 0.0;
};
ChiSquareResult chi_square_gof(const std::vector<std::uint64_t>& observed,
                               const std::vector<double>& expected_weights);

}  // namespace relht
