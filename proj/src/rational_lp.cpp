#include "relht/rational_lp.hpp"

#include <cassert>
#include <stdexcept>

namespace relht {

namespace {

// Column j < m is the variable y_j with constraint column (A_j, 1) and cost 0;
// column m + i is the artificial a_i (unit column e_i) with cost 1.
struct Tableau {
  std::size_t m = 0;  // y variables
  std::size_t k = 0;  // rows = d + 1
  const std::vector<std::vector<int>>* rows = nullptr;

  std::vector<std::vector<mpq_class>> binv;  // k x k
  std::vector<mpq_class> xb;                 // basic values, size k
  std::vector<std::size_t> basis;            // variable index per row

  // B^-1 * (column of variable j).
  std::vector<mpq_class> ftran(std::size_t j) const {
    std::vector<mpq_class> w(k, 0);
    if (j >= m) {
      const std::size_t i = j - m;
      for (std::size_t row = 0; row < k; ++row) w[row] = binv[row][i];
      return w;
    }
    const auto& a = (*rows)[j];
    for (std::size_t row = 0; row < k; ++row) {
      mpq_class acc = binv[row][k - 1];  // the trailing 1 from sum(y) = 1
      for (std::size_t i = 0; i + 1 < k; ++i) {
        const int c = a[i];
        if (c == 0) continue;
        if (c == 1)
          acc += binv[row][i];
        else if (c == -1)
          acc -= binv[row][i];
        else
          acc += binv[row][i] * c;
      }
      w[row] = acc;
    }
    return w;
  }
};

}  // namespace

FeasibilityResult solve_margin_feasibility(
    const std::vector<std::vector<int>>& rows) {
  FeasibilityResult result;
  if (rows.empty()) {
    result.feasible = true;
    return result;
  }
  const std::size_t d = rows[0].size();
  for (const auto& row : rows)
    if (row.size() != d) throw std::invalid_argument("ragged constraint matrix");

  const std::size_t m = rows.size();
  const std::size_t k = d + 1;

  Tableau t;
  t.m = m;
  t.k = k;
  t.rows = &rows;
  t.binv.assign(k, std::vector<mpq_class>(k, 0));
  for (std::size_t i = 0; i < k; ++i) t.binv[i][i] = 1;
  t.xb.assign(k, 0);
  t.xb[k - 1] = 1;  // b = (0, ..., 0, 1)
  t.basis.resize(k);
  for (std::size_t i = 0; i < k; ++i) t.basis[i] = m + i;

  auto is_artificial = [&](std::size_t j) { return j >= m; };

  for (;;) {
    // Simplex multipliers u = c_B^T B^-1; artificial cost 1, y cost 0.
    std::vector<mpq_class> u(k, 0);
    for (std::size_t row = 0; row < k; ++row) {
      if (!is_artificial(t.basis[row])) continue;
      for (std::size_t i = 0; i < k; ++i) u[i] += t.binv[row][i];
    }

    // Bland: entering = lowest-index variable with negative reduced cost.
    std::size_t enter = SIZE_MAX;
    for (std::size_t j = 0; j < m + k; ++j) {
      mpq_class rc;
      if (is_artificial(j)) {
        rc = 1 - u[j - m];
      } else {
        const auto& a = rows[j];
        mpq_class dot = u[k - 1];
        for (std::size_t i = 0; i + 1 < k; ++i) {
          const int c = a[i];
          if (c == 0) continue;
          if (c == 1)
            dot += u[i];
          else if (c == -1)
            dot -= u[i];
          else
            dot += u[i] * c;
        }
        rc = -dot;
      }
      if (rc < 0) {
        enter = j;
        break;
      }
    }

    if (enter == SIZE_MAX) {
      // Optimal. Objective = u . b = u[k-1].
      const mpq_class obj = u[k - 1];
      if (obj == 0) {
        // Farkas certificate from the basic y values.
        result.feasible = false;
        result.ray.assign(m, 0);
        for (std::size_t row = 0; row < k; ++row)
          if (!is_artificial(t.basis[row])) result.ray[t.basis[row]] = t.xb[row];
        // Exact re-check: ray >= 0, A^T ray = 0, sum(ray) = 1.
        mpq_class total = 0;
        for (const auto& y : result.ray) {
          if (y < 0) throw std::logic_error("negative certificate entry");
          total += y;
        }
        if (total != 1) throw std::logic_error("certificate not normalized");
        for (std::size_t i = 0; i < d; ++i) {
          mpq_class acc = 0;
          for (std::size_t j = 0; j < m; ++j)
            if (result.ray[j] != 0) acc += result.ray[j] * rows[j][i];
          if (acc != 0) throw std::logic_error("certificate violates A^T y = 0");
        }
        return result;
      }
      // Witness v = -u' / u_last satisfies A v >= 1.
      result.feasible = true;
      result.witness.resize(d);
      for (std::size_t i = 0; i < d; ++i) {
        result.witness[i] = -u[i] / obj;
        result.witness[i].canonicalize();
      }
      for (std::size_t j = 0; j < m; ++j) {
        mpq_class acc = 0;
        for (std::size_t i = 0; i < d; ++i)
          if (rows[j][i] != 0) acc += result.witness[i] * rows[j][i];
        if (acc < 1) throw std::logic_error("witness fails margin re-check");
      }
      return result;
    }

    std::vector<mpq_class> w = t.ftran(enter);

    // Ratio test; Bland tie-break on the leaving variable index.
    std::size_t leave_row = SIZE_MAX;
    mpq_class best_ratio;
    for (std::size_t row = 0; row < k; ++row) {
      if (w[row] <= 0) continue;
      mpq_class ratio = t.xb[row] / w[row];
      if (leave_row == SIZE_MAX || ratio < best_ratio ||
          (ratio == best_ratio && t.basis[row] < t.basis[leave_row])) {
        leave_row = row;
        best_ratio = ratio;
      }
    }
    if (leave_row == SIZE_MAX)
      throw std::logic_error("phase-1 simplex unbounded");  // cannot happen

    // Pivot: basis change and B^-1 update.
    const mpq_class piv = w[leave_row];
    for (std::size_t i = 0; i < k; ++i) t.binv[leave_row][i] /= piv;
    t.xb[leave_row] /= piv;
    for (std::size_t row = 0; row < k; ++row) {
      if (row == leave_row || w[row] == 0) continue;
      const mpq_class factor = w[row];
      for (std::size_t i = 0; i < k; ++i)
        t.binv[row][i] -= factor * t.binv[leave_row][i];
      t.xb[row] -= factor * t.xb[leave_row];
    }
    t.basis[leave_row] = enter;
  }
}

}  // namespace relht
