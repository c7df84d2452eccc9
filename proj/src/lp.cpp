#include "ftcausal/lp.hpp"

#include "ftcausal/error.hpp"

namespace ftcausal {

void LinearProgram::add_row(std::vector<Rational> coefficients, RowSense sense, Rational b) {
  if (coefficients.size() != num_vars) throw ValidationError("LP row has the wrong width");
  rows.push_back(std::move(coefficients));
  senses.push_back(sense);
  rhs.push_back(std::move(b));
}

namespace {

constexpr int kDegenerateRunBeforeBland = 50;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : cols_(cols), t_(rows, std::vector<Rational>(cols + 1)), d_(cols + 1), basis_(rows, 0) {}

  std::size_t rows() const { return t_.size(); }
  Rational& at(std::size_t i, std::size_t j) { return t_[i][j]; }
  Rational& rhs(std::size_t i) { return t_[i][cols_]; }
  Rational& cost(std::size_t j) { return d_[j]; }
  // Current objective of the minimisation.
  Rational objective() const { return -d_[cols_]; }
  std::size_t& basis(std::size_t i) { return basis_[i]; }

  void pivot(std::size_t p, std::size_t q) {
    auto& prow = t_[p];
    const Rational e = prow[q];
    nonzero_.clear();
    for (std::size_t k = 0; k <= cols_; ++k) {
      if (sgn(prow[k]) != 0) {
        prow[k] /= e;
        nonzero_.push_back(k);
      }
    }
    auto eliminate = [&](std::vector<Rational>& row) {
      if (sgn(row[q]) == 0) return;
      const Rational f = row[q];
      for (std::size_t k : nonzero_) row[k] -= f * prow[k];
    };
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (i != p) eliminate(t_[i]);
    }
    eliminate(d_);
    basis_[p] = q;
  }

  // Runs the simplex on the current cost row over columns < `limit`.
  // Returns false if unbounded.
  bool optimise(std::size_t limit, std::size_t& pivots, std::size_t cap) {
    int degenerate = 0;
    bool bland = false;
    for (;;) {
      std::size_t q = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (sgn(d_[j]) >= 0) continue;
        if (q == limit || (!bland && d_[j] < d_[q])) q = j;
        if (bland) break;
      }
      if (q == limit) return true;
      std::size_t p = rows();
      Rational best;
      for (std::size_t i = 0; i < rows(); ++i) {
        if (sgn(t_[i][q]) <= 0) continue;
        Rational ratio = t_[i][cols_] / t_[i][q];
        if (p == rows() || ratio < best || (ratio == best && basis_[i] < basis_[p])) {
          p = i;
          best = std::move(ratio);
        }
      }
      if (p == rows()) return false;
      if (++pivots > cap) {
        throw ResourceError("simplex exceeded the pivot cap of " + std::to_string(cap));
      }
      if (sgn(best) == 0) {
        if (++degenerate > kDegenerateRunBeforeBland) bland = true;
      } else {
        degenerate = 0;
      }
      pivot(p, q);
    }
  }

 private:
  std::size_t cols_;
  std::vector<std::vector<Rational>> t_;
  std::vector<Rational> d_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> nonzero_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, std::size_t pivot_cap) {
  const std::size_t m = lp.rows.size();
  const std::size_t n = lp.num_vars;
  if (lp.senses.size() != m || lp.rhs.size() != m) throw ValidationError("LP shape mismatch");
  if (!lp.objective.empty() && lp.objective.size() != n) {
    throw ValidationError("LP objective has the wrong width");
  }
  std::vector<int> sign(m, 1);
  std::vector<RowSense> sense = lp.senses;
  std::size_t slacks = 0, artificials = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (lp.rows[i].size() != n) throw ValidationError("LP row has the wrong width");
    if (sgn(lp.rhs[i]) < 0) {
      sign[i] = -1;
      if (sense[i] == RowSense::kLessEqual) {
        sense[i] = RowSense::kGreaterEqual;
      } else if (sense[i] == RowSense::kGreaterEqual) {
        sense[i] = RowSense::kLessEqual;
      }
    }
    if (sense[i] != RowSense::kEqual) ++slacks;
    if (sense[i] != RowSense::kLessEqual) ++artificials;
  }
  const std::size_t first_artificial = n + slacks;
  const std::size_t cols = first_artificial + artificials;
  Tableau t(m, cols);
  // Column that formed the initial identity basis in each row.
  std::vector<std::size_t> initial(m);
  std::size_t next_slack = n, next_artificial = first_artificial;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(lp.rows[i][j]) != 0) t.at(i, j) = sign[i] < 0 ? Rational(-lp.rows[i][j]) : lp.rows[i][j];
    }
    t.rhs(i) = sign[i] < 0 ? Rational(-lp.rhs[i]) : lp.rhs[i];
    if (sense[i] == RowSense::kLessEqual) {
      t.at(i, next_slack) = 1;
      initial[i] = next_slack++;
    } else {
      if (sense[i] == RowSense::kGreaterEqual) t.at(i, next_slack++) = -1;
      t.at(i, next_artificial) = 1;
      initial[i] = next_artificial++;
    }
    t.basis(i) = initial[i];
  }

  LpSolution out;
  // Phase 1: minimise the sum of artificials.
  for (std::size_t j = first_artificial; j < cols; ++j) t.cost(j) = 1;
  for (std::size_t i = 0; i < m; ++i) {
    if (initial[i] < first_artificial) continue;
    for (std::size_t j = 0; j <= cols; ++j) {
      if (sgn(t.at(i, j)) != 0) t.cost(j) -= t.at(i, j);
    }
  }
  t.optimise(cols, out.pivots, pivot_cap);
  if (sgn(t.objective()) > 0) {
    out.status = LpStatus::kInfeasible;
    out.farkas.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const Rational c = initial[i] >= first_artificial ? Rational(1) : Rational(0);
      Rational y = c - t.cost(initial[i]);
      out.farkas[i] = sign[i] < 0 ? Rational(-y) : y;
    }
    return out;
  }

  // Drive zero-level artificials out of the basis where possible; rows
  // where that fails are redundant and stay inert.
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis(i) < first_artificial) continue;
    for (std::size_t j = 0; j < first_artificial; ++j) {
      if (sgn(t.at(i, j)) != 0) {
        t.pivot(i, j);
        ++out.pivots;
        break;
      }
    }
  }

  if (!lp.objective.empty()) {
    // Phase 2: minimise -objective over the non-artificial columns.
    for (std::size_t j = 0; j <= cols; ++j) t.cost(j) = 0;
    for (std::size_t j = 0; j < n; ++j) t.cost(j) = -lp.objective[j];
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t b = t.basis(i);
      if (b >= n || sgn(t.cost(b)) == 0) continue;
      const Rational f = t.cost(b);
      for (std::size_t j = 0; j <= cols; ++j) {
        if (sgn(t.at(i, j)) != 0) t.cost(j) -= f * t.at(i, j);
      }
    }
    if (!t.optimise(first_artificial, out.pivots, pivot_cap)) {
      out.status = LpStatus::kUnbounded;
      return out;
    }
  }
  out.status = LpStatus::kOptimal;
  out.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis(i) < n) out.x[t.basis(i)] = t.rhs(i);
  }
  out.value = 0;
  if (!lp.objective.empty()) {
    for (std::size_t j = 0; j < n; ++j) out.value += lp.objective[j] * out.x[j];
  }
  return out;
}

bool farkas_certifies(const LinearProgram& lp, const std::vector<Rational>& y) {
  if (y.size() != lp.rows.size()) return false;
  Rational yb = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (lp.senses[i] == RowSense::kLessEqual && sgn(y[i]) > 0) return false;
    if (lp.senses[i] == RowSense::kGreaterEqual && sgn(y[i]) < 0) return false;
    yb += y[i] * lp.rhs[i];
  }
  if (sgn(yb) <= 0) return false;
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    Rational col = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (sgn(y[i]) != 0 && sgn(lp.rows[i][j]) != 0) col += y[i] * lp.rows[i][j];
    }
    if (sgn(col) > 0) return false;
  }
  return true;
}

}  // namespace ftcausal
