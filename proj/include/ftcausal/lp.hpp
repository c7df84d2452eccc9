#pragma once

#include <cstddef>
#include <vector>

#include "ftcausal/rational.hpp"

namespace ftcausal {

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

// maximize objective . x  subject to  rows[i] . x (sense_i) rhs[i],  x >= 0.
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<std::vector<Rational>> rows;
  std::vector<RowSense> senses;
  std::vector<Rational> rhs;
  std::vector<Rational> objective;  // empty means feasibility only

  void add_row(std::vector<Rational> coefficients, RowSense sense, Rational b);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<Rational> x;
  Rational value;
  // Only for kInfeasible: y with y.A_j <= 0 for every column j, y.b > 0,
  // y_i <= 0 on <= rows and y_i >= 0 on >= rows. Any x >= 0 satisfying the
  // rows would give 0 >= y.Ax >= y.b > 0.
  std::vector<Rational> farkas;
  std::size_t pivots = 0;
};

inline constexpr std::size_t kDefaultPivotCap = 1'000'000;

// Two-phase dense tableau simplex in exact arithmetic. Largest-coefficient
// pricing, switching to Bland's rule after a run of degenerate pivots so
// the method always terminates.
LpSolution solve_lp(const LinearProgram& lp, std::size_t pivot_cap = kDefaultPivotCap);

// Independent check of a Farkas certificate against the program's rows.
bool farkas_certifies(const LinearProgram& lp, const std::vector<Rational>& y);

}  // namespace ftcausal
