#pragma once

#include <cstdint>

namespace relht {

// Instance parameters. `manual` takes explicit values; `paper_mode` derives
// them from n alone (delta = 1/log^2 n, r = delta*n rounded down to an even
// integer >= 2, s = round(0.05 log n / log log n), t = round(10 log s),
// q = round(n^0.01), all logs base `log_base`). Desk-scale n makes several of
// those round to zero; paper_mode clamps s, t, q up to 1 so the result is
// still a valid Params, and callers can read the unclamped values from the
// derivation if they care.
struct Params {
  std::uint32_t n = 0;
  double delta = 0.0;  // flip rate; defaults to r/n in manual mode
  std::uint32_t r = 0;
  std::uint32_t s = 1;
  std::uint32_t t = 1;
  std::uint32_t q = 1;
  double log_base = 2.0;

  static Params manual(std::uint32_t n, std::uint32_t r, std::uint32_t s,
                       std::uint32_t t, std::uint32_t q, double delta = 0.0,
                       double log_base = 2.0);
  static Params paper_mode(std::uint32_t n, double log_base = 2.0);

  void validate() const;  // throws std::invalid_argument on violation
};

// Largest even integer <= x, floored at 2.
std::uint32_t round_to_even_radius(double x);

}  // namespace relht
