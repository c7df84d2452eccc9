#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ftcausal/joint.hpp"
#include "ftcausal/scenario.hpp"

namespace ftcausal {

// (X _||_ Y | Z) over the variables of some universe. Symmetry is a
// normalisation: canonical statements put first the side holding the
// lowest-indexed variable of X u Y.
struct CIStatement {
  VarSet x = 0;
  VarSet y = 0;
  VarSet z = 0;

  static CIStatement canonical(VarSet x, VarSet y, VarSet z);
  bool valid() const { return x && y && !(x & y) && !(x & z) && !(y & z); }

  auto operator<=>(const CIStatement&) const = default;
};

enum class Axiom { kGround, kDecomposition, kWeakUnion, kContraction, kIntersection };

std::string_view axiom_name(Axiom a);
Axiom parse_axiom(std::string_view name);

struct Derivation {
  Axiom axiom = Axiom::kGround;
  std::vector<std::size_t> premises;  // indices into the owning CISet

  bool operator==(const Derivation&) const = default;
};

// A set of CI statements with one derivation trace per statement.
class CISet {
 public:
  explicit CISet(std::vector<std::string> universe);

  const std::vector<std::string>& universe() const { return universe_; }
  std::size_t size() const { return statements_.size(); }
  const CIStatement& statement(std::size_t i) const { return statements_.at(i); }
  const Derivation& derivation(std::size_t i) const { return derivations_.at(i); }
  const std::vector<CIStatement>& statements() const { return statements_; }

  bool contains(const CIStatement& s) const;
  std::optional<std::size_t> find(const CIStatement& s) const;
  // Canonicalises `s`; returns false (and records nothing) if present.
  bool insert(const CIStatement& s, Derivation d = {});

  // Statement sets compared irrespective of order and traces.
  bool same_statements(const CISet& other) const;

  VarSet names_to_set(const std::vector<std::string>& names) const;
  std::string format(const CIStatement& s) const;
  CIStatement parse(std::string_view text) const;

 private:
  std::vector<std::string> universe_;
  std::vector<CIStatement> statements_;
  std::vector<Derivation> derivations_;
  std::map<CIStatement, std::size_t> index_;
};

// True iff P(x,y|z) = P(x|z) P(y|z) for every z with P(z) > 0, checked as
// P(xyz) P(z) = P(xz) P(yz), which also holds trivially on P(z) = 0.
bool ci_holds(const JointTable& joint, const CIStatement& s);

inline constexpr std::size_t kDefaultCiVariableCap = 8;

// Every canonical statement with disjoint non-empty X, Y and any Z that
// holds exactly in `joint`.
CISet enumerate_ci(const JointTable& joint, std::size_t variable_cap = kDefaultCiVariableCap);

struct AxiomSelection {
  bool decomposition = true;
  bool weak_union = true;
  bool contraction = true;
  // Sound only for strictly positive distributions.
  bool intersection = false;

  static AxiomSelection semigraphoid() { return {}; }
  static AxiomSelection graphoid() { return {true, true, true, true}; }
};

// Least fixed point of the selected axioms over `seed`. Every derived
// statement records the axiom and premises that produced it.
CISet graphoid_closure(const CISet& seed, AxiomSelection axioms);

// Re-applies the recorded axiom to the recorded premises, independently of
// the closure engine, and checks that it yields the statement.
bool derivation_replays(const CISet& set, std::size_t index);

// Text listing, one "X , Y | Z" line per statement with its derivation
// trace in a trailing comment.
std::string to_text(const CISet& set);
// Parses the listing produced by to_text (traces are re-read when present).
CISet parse_ci_text(std::string_view text, std::vector<std::string> universe);

// Observed variables A1..An, X1..Xn of an n-slot scenario, in that order.
std::vector<std::string> observed_universe(int n);
int outcome_variable(int n, int slot);
int setting_variable(int n, int slot);

// Joint over A u X: P(a, x) = w(x) P(a|x), where w is the phenomenon's
// context weights or uniform over contexts when absent. Setting X_i ranges
// over the padded scenario's slot values.
JointTable observed_joint(const Phenomenon& p);

// The no-disturbance conditions (A_g _||_ X_\g | X_g) for every non-empty
// proper slot subset g, as ground statements over observed_universe(n).
// Throws DisturbanceError when p does not satisfy no-disturbance.
CISet nd_as_ci(const Phenomenon& p);

// The same statements without consulting any phenomenon.
CISet nd_statements(int n);

}  // namespace ftcausal
