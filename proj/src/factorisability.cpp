#include "ftcausal/factorisability.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "ftcausal/lp.hpp"

namespace ftcausal {
namespace {

// Dense tableau entries above which the LP is refused.
constexpr std::size_t kDenseEntryCap = 20'000'000;

std::size_t context_rows(const Scenario& s, int c) {
  std::size_t rows = 1;
  for (std::size_t k = 0; k < s.contexts()[c].size(); ++k) rows *= s.outcomes().size();
  return rows;
}

// Row of the (context, outcome tuple) LP layout hit by a strategy.
std::size_t hit_row(const Scenario& s, int c, const DeterministicStrategy& lambda) {
  std::size_t r = 0;
  for (int m : s.contexts()[c]) r = r * s.outcomes().size() + lambda[m];
  return r;
}

std::vector<FunctionalTerm> correlator_terms(const Scenario& s,
                                             const std::vector<std::string>& ids, int sign) {
  std::vector<int> ms;
  for (const auto& id : ids) ms.push_back(s.measurement_index(id));
  std::vector<FunctionalTerm> out;
  const int k = static_cast<int>(ms.size());
  for (int bits = 0; bits < (1 << k); ++bits) {
    std::vector<int> outcomes;
    for (int j = 0; j < k; ++j) outcomes.push_back((bits >> (k - 1 - j)) & 1);
    const int parity = std::popcount(static_cast<unsigned>(bits)) % 2;
    out.push_back({ms, outcomes, Rational(parity ? -sign : sign)});
  }
  return out;
}

bool has_measurements(const Scenario& s, const std::vector<std::string>& ids) {
  for (const auto& id : ids) {
    if (std::find(s.measurements().begin(), s.measurements().end(), id) == s.measurements().end()) {
      return false;
    }
  }
  return true;
}

bool has_context(const Scenario& s, const std::vector<std::string>& ids) {
  std::vector<int> ms;
  for (const auto& id : ids) ms.push_back(s.measurement_index(id));
  return s.find_context(ms).has_value();
}

struct CorrelatorSpec {
  std::vector<std::string> measurements;
  int sign;
};

std::optional<InequalityFunctional> correlator_functional(const Scenario& s, std::string name,
                                                          BoundSense sense,
                                                          const std::vector<CorrelatorSpec>& spec) {
  if (s.outcomes().size() != 2) return std::nullopt;
  for (const auto& c : spec) {
    if (!has_measurements(s, c.measurements) || !has_context(s, c.measurements)) {
      return std::nullopt;
    }
  }
  InequalityFunctional f{std::move(name), sense, {}, Rational(0)};
  for (const auto& c : spec) {
    auto terms = correlator_terms(s, c.measurements, c.sign);
    f.terms.insert(f.terms.end(), terms.begin(), terms.end());
  }
  return with_classical_bound(s, std::move(f));
}

// Scales coefficients to coprime integers.
void make_integral(std::vector<Rational>& y) {
  mpz_class den = 1, num = 0;
  for (const auto& v : y) {
    if (sgn(v) == 0) continue;
    den = lcm(den, mpz_class(v.get_den()));
  }
  for (auto& v : y) {
    v *= den;
    v.canonicalize();
    num = gcd(num, mpz_class(v.get_num()));
  }
  if (num > 1) {
    for (auto& v : y) v /= Rational(num);
  }
}

}  // namespace

std::size_t strategy_count(const Scenario& s, std::size_t cap) {
  std::size_t total = 1;
  for (std::size_t k = 0; k < s.measurements().size(); ++k) {
    if (total > cap / s.outcomes().size()) {
      throw ResourceError("strategy count exceeds the cap of " + std::to_string(cap));
    }
    total *= s.outcomes().size();
  }
  if (total > cap) throw ResourceError("strategy count exceeds the cap of " + std::to_string(cap));
  return total;
}

DeterministicStrategy strategy_at(const Scenario& s, std::size_t index) {
  const std::size_t base = s.outcomes().size();
  DeterministicStrategy out(s.measurements().size());
  for (int m = static_cast<int>(out.size()) - 1; m >= 0; --m) {
    out[m] = static_cast<int>(index % base);
    index /= base;
  }
  return out;
}

std::vector<DeterministicStrategy> enumerate_strategies(const PaddedScenario& s, std::size_t cap) {
  const std::size_t total = strategy_count(s.base(), cap);
  std::vector<DeterministicStrategy> out;
  out.reserve(total);
  for (std::size_t i = 0; i < total; ++i) out.push_back(strategy_at(s.base(), i));
  return out;
}

void validate_functional(const Scenario& s, const InequalityFunctional& f) {
  if (f.terms.empty()) throw ValidationError("functional '" + f.name + "' has no terms");
  const int k = static_cast<int>(s.measurements().size());
  const int o = static_cast<int>(s.outcomes().size());
  for (const auto& t : f.terms) {
    if (t.measurements.size() != t.outcomes.size()) {
      throw ValidationError("functional term with mismatched measurement/outcome tuples");
    }
    for (int m : t.measurements) {
      if (m < 0 || m >= k) throw ValidationError("functional term names an unknown measurement");
    }
    for (int a : t.outcomes) {
      if (a < 0 || a >= o) throw ValidationError("functional term names an unknown outcome");
    }
    if (!s.find_context(t.measurements)) {
      throw ValidationError("functional term does not match any context");
    }
  }
}

Rational strategy_value(const InequalityFunctional& f, const DeterministicStrategy& lambda) {
  Rational v = 0;
  for (const auto& t : f.terms) {
    bool hit = true;
    for (std::size_t j = 0; j < t.measurements.size() && hit; ++j) {
      hit = lambda[t.measurements[j]] == t.outcomes[j];
    }
    if (hit) v += t.coefficient;
  }
  return v;
}

Rational classical_bound(const Scenario& s, const InequalityFunctional& f, std::size_t cap) {
  validate_functional(s, f);
  const std::size_t total = strategy_count(s, cap);
  Rational best = strategy_value(f, strategy_at(s, 0));
  for (std::size_t i = 1; i < total; ++i) {
    Rational v = strategy_value(f, strategy_at(s, i));
    if (f.sense == BoundSense::kUpper ? v > best : v < best) best = std::move(v);
  }
  return best;
}

InequalityFunctional with_classical_bound(const Scenario& s, InequalityFunctional f) {
  f.bound = classical_bound(s, f);
  return f;
}

InequalityEvaluation evaluate_inequality(const Phenomenon& p, const InequalityFunctional& f) {
  const Scenario& s = p.scenario().base();
  InequalityEvaluation out;
  out.bound = classical_bound(s, f);
  out.value = 0;
  for (const auto& t : f.terms) out.value += t.coefficient * p.probability(t.measurements, t.outcomes);
  out.violated = f.sense == BoundSense::kUpper ? out.value > out.bound : out.value < out.bound;
  return out;
}

std::vector<std::string> builtin_functional_names() { return {"chsh", "mermin3", "kcbs"}; }

std::vector<InequalityFunctional> builtin_functionals(const Scenario& s) {
  std::vector<InequalityFunctional> out;
  if (auto f = correlator_functional(s, "chsh", BoundSense::kUpper,
                                     {{{"a0", "b0"}, 1},
                                      {{"a0", "b1"}, 1},
                                      {{"a1", "b0"}, 1},
                                      {{"a1", "b1"}, -1}})) {
    out.push_back(std::move(*f));
  }
  if (auto f = correlator_functional(s, "mermin3", BoundSense::kUpper,
                                     {{{"a0", "b0", "c0"}, 1},
                                      {{"a0", "b1", "c1"}, -1},
                                      {{"a1", "b0", "c1"}, -1},
                                      {{"a1", "b1", "c0"}, -1}})) {
    out.push_back(std::move(*f));
  }
  if (auto f = correlator_functional(s, "kcbs", BoundSense::kLower,
                                     {{{"m0", "m1"}, 1},
                                      {{"m1", "m2"}, 1},
                                      {{"m2", "m3"}, 1},
                                      {{"m3", "m4"}, 1},
                                      {{"m4", "m0"}, 1}})) {
    out.push_back(std::move(*f));
  }
  return out;
}

namespace {

// Maximally violated functional with coefficients in [-1, 1]:
//   maximise y.p - beta  s.t.  y.M_lambda <= beta for every strategy.
// Substituting y = u - 1 (0 <= u <= 2) and beta = b+ - b- keeps all
// variables non-negative; each strategy hits one row per context, so the
// strategy rows read  u.M_lambda - b+ + b- <= #contexts.
std::optional<std::vector<Rational>> normalised_witness(const Scenario& s,
                                                        const std::vector<Rational>& p,
                                                        std::size_t strategies) {
  const std::size_t rows = p.size();
  LinearProgram lp;
  lp.num_vars = rows + 2;
  const Rational contexts(static_cast<long>(s.contexts().size()));
  std::vector<std::size_t> offsets;
  std::size_t offset = 0;
  for (int c = 0; c < static_cast<int>(s.contexts().size()); ++c) {
    offsets.push_back(offset);
    offset += context_rows(s, c);
  }
  for (std::size_t i = 0; i < strategies; ++i) {
    const auto lambda = strategy_at(s, i);
    std::vector<Rational> row(lp.num_vars);
    for (int c = 0; c < static_cast<int>(s.contexts().size()); ++c) {
      row[offsets[c] + hit_row(s, c, lambda)] = 1;
    }
    row[rows] = -1;
    row[rows + 1] = 1;
    lp.add_row(std::move(row), RowSense::kLessEqual, contexts);
  }
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<Rational> row(lp.num_vars);
    row[r] = 1;
    lp.add_row(std::move(row), RowSense::kLessEqual, Rational(2));
  }
  lp.objective.assign(lp.num_vars, Rational(0));
  for (std::size_t r = 0; r < rows; ++r) lp.objective[r] = p[r];
  lp.objective[rows] = -1;
  lp.objective[rows + 1] = 1;
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal) return std::nullopt;
  std::vector<Rational> y(rows);
  for (std::size_t r = 0; r < rows; ++r) y[r] = sol.x[r] - 1;
  return y;
}

InequalityFunctional functional_from_rows(const Scenario& s, const std::vector<Rational>& y) {
  InequalityFunctional f{"farkas-witness", BoundSense::kUpper, {}, Rational(0)};
  std::size_t r = 0;
  const std::size_t base = s.outcomes().size();
  for (const auto& ctx : s.contexts()) {
    std::size_t count = 1;
    for (std::size_t k = 0; k < ctx.size(); ++k) count *= base;
    for (std::size_t k = 0; k < count; ++k, ++r) {
      if (sgn(y[r]) == 0) continue;
      std::vector<int> outcomes(ctx.size());
      std::size_t rest = k;
      for (int j = static_cast<int>(ctx.size()) - 1; j >= 0; --j) {
        outcomes[j] = static_cast<int>(rest % base);
        rest /= base;
      }
      f.terms.push_back({ctx, std::move(outcomes), y[r]});
    }
  }
  return f;
}

}  // namespace

FeasibilityCertificate is_factorisable(const Phenomenon& p, const FactorisabilityOptions& options) {
  FeasibilityCertificate cert;
  if (!options.allow_disturbing) {
    NdReport nd = check_no_disturbance(p);
    if (!nd.holds()) throw DisturbanceError(std::move(nd));
    cert.nd_checked = true;
  }
  const Scenario& s = p.scenario().base();
  const int num_contexts = static_cast<int>(s.contexts().size());
  const std::size_t strategies = strategy_count(s, options.strategy_cap);
  cert.strategy_count = strategies;

  std::vector<Rational> target;
  std::vector<std::size_t> offsets;
  for (int c = 0; c < num_contexts; ++c) {
    offsets.push_back(target.size());
    const auto row = p.context_row(c);
    target.insert(target.end(), row.begin(), row.end());
  }
  if (target.size() * strategies > kDenseEntryCap) {
    throw ResourceError("factorisability LP with " + std::to_string(target.size()) + " rows and " +
                        std::to_string(strategies) + " strategies exceeds the dense size cap");
  }
  LinearProgram lp;
  lp.num_vars = strategies;
  lp.rows.assign(target.size(), std::vector<Rational>(strategies));
  lp.senses.assign(target.size(), RowSense::kEqual);
  lp.rhs = target;
  for (std::size_t i = 0; i < strategies; ++i) {
    const auto lambda = strategy_at(s, i);
    for (int c = 0; c < num_contexts; ++c) lp.rows[offsets[c] + hit_row(s, c, lambda)][i] = 1;
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status == LpStatus::kOptimal) {
    cert.feasible = true;
    for (std::size_t i = 0; i < strategies; ++i) {
      if (sgn(sol.x[i]) != 0) cert.weights.push_back({i, strategy_at(s, i), sol.x[i]});
    }
  } else {
    std::vector<Rational> y = sol.farkas;
    if (strategies <= options.normalise_cap) {
      if (auto better = normalised_witness(s, target, strategies)) y = std::move(*better);
    }
    make_integral(y);
    InequalityFunctional f = functional_from_rows(s, y);
    f = with_classical_bound(s, std::move(f));
    cert.witness_value = evaluate_inequality(p, f).value;
    cert.witness = std::move(f);
  }
  if (!certificate_verifies(p, cert)) {
    throw Error("factorisability certificate failed independent verification");
  }
  return cert;
}

bool certificate_verifies(const Phenomenon& p, const FeasibilityCertificate& cert) {
  const Scenario& s = p.scenario().base();
  if (cert.feasible) {
    Rational total = 0;
    std::vector<std::vector<Rational>> rows;
    for (int c = 0; c < static_cast<int>(s.contexts().size()); ++c) {
      rows.emplace_back(context_rows(s, c), Rational(0));
    }
    for (const auto& w : cert.weights) {
      if (sgn(w.weight) < 0 || w.strategy.size() != s.measurements().size()) return false;
      total += w.weight;
      for (int c = 0; c < static_cast<int>(s.contexts().size()); ++c) {
        rows[c][hit_row(s, c, w.strategy)] += w.weight;
      }
    }
    if (total != 1) return false;
    for (int c = 0; c < static_cast<int>(s.contexts().size()); ++c) {
      if (rows[c] != p.context_row(c)) return false;
    }
    return true;
  }
  if (!cert.witness) return false;
  // Recompute both sides by direct enumeration.
  const auto& f = *cert.witness;
  validate_functional(s, f);
  Rational value = 0;
  for (const auto& t : f.terms) value += t.coefficient * p.probability(t.measurements, t.outcomes);
  const std::size_t total = strategy_count(s, std::max(cert.strategy_count, std::size_t{1}));
  const bool upper = f.sense == BoundSense::kUpper;
  Rational extreme;
  for (std::size_t i = 0; i < total; ++i) {
    const Rational v = strategy_value(f, strategy_at(s, i));
    if (i == 0 || (upper ? v > extreme : v < extreme)) extreme = v;
  }
  if (total == 0 || extreme != f.bound) return false;
  return value == cert.witness_value && (upper ? value > extreme : value < extreme);
}

}  // namespace ftcausal
