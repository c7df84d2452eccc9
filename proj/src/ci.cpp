#include "ftcausal/ci.hpp"

#include <bit>
#include <sstream>
#include <unordered_map>

#include "ftcausal/error.hpp"

namespace ftcausal {
namespace {

VarSet lowest_bit(VarSet s) { return s & (~s + 1); }

struct Oriented {
  VarSet first;
  VarSet second;
  VarSet given;
};

std::array<Oriented, 2> orientations(const CIStatement& s) {
  return {Oriented{s.x, s.y, s.z}, Oriented{s.y, s.x, s.z}};
}

std::vector<std::string> split_ws(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream is{std::string(text)};
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

}  // namespace

CIStatement CIStatement::canonical(VarSet x, VarSet y, VarSet z) {
  if (lowest_bit(x | y) & y) std::swap(x, y);
  return CIStatement{x, y, z};
}

std::string_view axiom_name(Axiom a) {
  switch (a) {
    case Axiom::kGround:
      return "ground";
    case Axiom::kDecomposition:
      return "decomposition";
    case Axiom::kWeakUnion:
      return "weak-union";
    case Axiom::kContraction:
      return "contraction";
    case Axiom::kIntersection:
      return "intersection";
  }
  return "ground";
}

Axiom parse_axiom(std::string_view name) {
  for (Axiom a : {Axiom::kGround, Axiom::kDecomposition, Axiom::kWeakUnion, Axiom::kContraction,
                  Axiom::kIntersection}) {
    if (axiom_name(a) == name) return a;
  }
  throw ValidationError("unknown axiom '" + std::string(name) + "'");
}

CISet::CISet(std::vector<std::string> universe) : universe_(std::move(universe)) {
  if (universe_.size() > 63) throw ValidationError("CI universe too large");
}

bool CISet::contains(const CIStatement& s) const {
  return index_.count(CIStatement::canonical(s.x, s.y, s.z)) > 0;
}

std::optional<std::size_t> CISet::find(const CIStatement& s) const {
  auto it = index_.find(CIStatement::canonical(s.x, s.y, s.z));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool CISet::insert(const CIStatement& s, Derivation d) {
  const CIStatement c = CIStatement::canonical(s.x, s.y, s.z);
  if (!c.valid()) throw ValidationError("CI statement sets must be disjoint with X, Y non-empty");
  const VarSet universe_mask = (VarSet{1} << universe_.size()) - 1;
  if ((c.x | c.y | c.z) & ~universe_mask) throw ValidationError("CI statement outside universe");
  for (std::size_t p : d.premises) {
    if (p >= statements_.size()) throw ValidationError("derivation premise out of range");
  }
  if (index_.count(c)) return false;
  index_.emplace(c, statements_.size());
  statements_.push_back(c);
  derivations_.push_back(std::move(d));
  return true;
}

bool CISet::same_statements(const CISet& other) const {
  if (size() != other.size()) return false;
  for (const auto& s : statements_) {
    if (!other.contains(s)) return false;
  }
  return true;
}

VarSet CISet::names_to_set(const std::vector<std::string>& names) const {
  VarSet out = 0;
  for (const auto& n : names) {
    bool found = false;
    for (std::size_t i = 0; i < universe_.size(); ++i) {
      if (universe_[i] == n) {
        out |= VarSet{1} << i;
        found = true;
      }
    }
    if (!found) throw ValidationError("unknown variable '" + n + "'");
  }
  return out;
}

std::string CISet::format(const CIStatement& s) const {
  auto join = [&](VarSet set) {
    std::string out;
    for (std::size_t i = 0; i < universe_.size(); ++i) {
      if (!((set >> i) & 1u)) continue;
      if (!out.empty()) out += ' ';
      out += universe_[i];
    }
    return out;
  };
  std::string z = join(s.z);
  return join(s.x) + " , " + join(s.y) + " |" + (z.empty() ? "" : " " + z);
}

CIStatement CISet::parse(std::string_view text) const {
  const auto comma = text.find(',');
  const auto bar = text.find('|');
  if (comma == std::string_view::npos || bar == std::string_view::npos || bar < comma) {
    throw ValidationError("CI statement must read 'X , Y | Z': '" + std::string(text) + "'");
  }
  CIStatement s = CIStatement::canonical(names_to_set(split_ws(text.substr(0, comma))),
                                         names_to_set(split_ws(text.substr(comma + 1, bar - comma - 1))),
                                         names_to_set(split_ws(text.substr(bar + 1))));
  if (!s.valid()) throw ValidationError("CI statement sets overlap or are empty");
  return s;
}

namespace {

// Marginals keyed by variable subset, computed on demand.
class MarginalCache {
 public:
  explicit MarginalCache(const JointTable& joint) : joint_(joint) {}

  const JointTable& get(VarSet keep) {
    auto it = cache_.find(keep);
    if (it == cache_.end()) it = cache_.emplace(keep, joint_.marginal(keep)).first;
    return it->second;
  }

 private:
  const JointTable& joint_;
  std::unordered_map<VarSet, JointTable> cache_;
};

// Index of a sub-assignment inside the marginal over `sub`, given the digit
// vector of an assignment over `super` (sub is a subset of super; variables
// keep their original relative order).
std::size_t sub_index(const std::vector<int>& digits, VarSet super, VarSet sub,
                      const std::vector<int>& cards_by_var) {
  std::size_t idx = 0;
  int k = 0;
  for (VarSet rest = super; rest; rest &= rest - 1, ++k) {
    const int v = std::countr_zero(rest);
    if ((sub >> v) & 1u) idx = idx * static_cast<std::size_t>(cards_by_var[v]) + digits[k];
  }
  return idx;
}

bool ci_holds_cached(MarginalCache& cache, const std::vector<int>& cards, const CIStatement& s) {
  const VarSet xyz = s.x | s.y | s.z;
  const JointTable& pxyz = cache.get(xyz);
  const JointTable& pxz = cache.get(s.x | s.z);
  const JointTable& pyz = cache.get(s.y | s.z);
  const JointTable& pz = cache.get(s.z);
  const auto& m = pxyz.probabilities();
  std::vector<int> digits(pxyz.num_variables(), 0);
  const auto& mcards = pxyz.cardinalities();
  for (std::size_t flat = 0; flat < m.size(); ++flat) {
    const Rational& z = pz.probabilities()[sub_index(digits, xyz, s.z, cards)];
    if (z != 0) {
      const Rational& a = pxz.probabilities()[sub_index(digits, xyz, s.x | s.z, cards)];
      const Rational& b = pyz.probabilities()[sub_index(digits, xyz, s.y | s.z, cards)];
      if (m[flat] * z != a * b) return false;
    }
    for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) {
      if (++digits[i] < mcards[i]) break;
      digits[i] = 0;
    }
  }
  return true;
}

}  // namespace

bool ci_holds(const JointTable& joint, const CIStatement& s) {
  if (!s.valid()) throw ValidationError("CI statement sets must be disjoint with X, Y non-empty");
  if ((s.x | s.y | s.z) & ~joint.all()) throw ValidationError("CI statement names unknown variables");
  MarginalCache cache(joint);
  return ci_holds_cached(cache, joint.cardinalities(), s);
}

CISet enumerate_ci(const JointTable& joint, std::size_t variable_cap) {
  const std::size_t n = joint.num_variables();
  if (n > variable_cap) {
    throw ResourceError("CI enumeration over " + std::to_string(n) +
                        " variables exceeds the cap of " + std::to_string(variable_cap));
  }
  CISet out(joint.names());
  MarginalCache cache(joint);
  const VarSet all = joint.all();
  for (VarSet x = 1; x <= all; ++x) {
    const VarSet rest = all & ~x;
    // y ranges over non-empty subsets of rest; keep canonical orientation.
    for (VarSet y = rest; y; y = (y - 1) & rest) {
      if (lowest_bit(x | y) & y) continue;
      const VarSet free = rest & ~y;
      for (VarSet z = free;; z = (z - 1) & free) {
        const CIStatement s{x, y, z};
        if (ci_holds_cached(cache, joint.cardinalities(), s)) out.insert(s);
        if (z == 0) break;
      }
    }
  }
  return out;
}

CISet graphoid_closure(const CISet& seed, AxiomSelection axioms) {
  CISet out = seed;
  auto combine = [&](std::size_t a, std::size_t b) {
    for (const auto& p : orientations(out.statement(a))) {
      for (const auto& q : orientations(out.statement(b))) {
        if (p.first != q.first) continue;
        // Contraction: (X _||_ Y | Z) & (X _||_ W | ZY) => (X _||_ YW | Z).
        if (axioms.contraction && (p.second & ~q.given) == 0 &&
            (q.given & ~p.second) == p.given) {
          out.insert({p.first, p.second | q.second, p.given}, {Axiom::kContraction, {a, b}});
        }
        // Intersection: (X _||_ W | ZY) & (X _||_ Y | ZW) => (X _||_ YW | Z).
        if (axioms.intersection && (q.second & ~p.given) == 0 && (p.second & ~q.given) == 0 &&
            (p.given & ~q.second) == (q.given & ~p.second)) {
          out.insert({p.first, p.second | q.second, p.given & ~q.second},
                     {Axiom::kIntersection, {a, b}});
        }
      }
    }
  };
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (axioms.decomposition || axioms.weak_union) {
      for (const auto& o : orientations(out.statement(i))) {
        for (VarSet part = (o.second - 1) & o.second; part; part = (part - 1) & o.second) {
          if (axioms.decomposition) {
            out.insert({o.first, part, o.given}, {Axiom::kDecomposition, {i}});
          }
          if (axioms.weak_union) {
            out.insert({o.first, part, o.given | (o.second & ~part)}, {Axiom::kWeakUnion, {i}});
          }
        }
      }
    }
    for (std::size_t j = 0; j <= i; ++j) {
      combine(i, j);
      if (j != i) combine(j, i);
    }
  }
  return out;
}

bool derivation_replays(const CISet& set, std::size_t index) {
  const CIStatement& conclusion = set.statement(index);
  const Derivation& d = set.derivation(index);
  auto same = [](VarSet x, VarSet y, VarSet z, const CIStatement& c) {
    return CIStatement::canonical(x, y, z) == c;
  };
  switch (d.axiom) {
    case Axiom::kGround:
      return d.premises.empty();
    case Axiom::kDecomposition:
    case Axiom::kWeakUnion: {
      if (d.premises.size() != 1) return false;
      const CIStatement& p = set.statement(d.premises[0]);
      for (const auto& [x, yw, z] : {std::tuple{p.x, p.y, p.z}, std::tuple{p.y, p.x, p.z}}) {
        for (const auto& [cx, cy, cz] :
             {std::tuple{conclusion.x, conclusion.y, conclusion.z},
              std::tuple{conclusion.y, conclusion.x, conclusion.z}}) {
          if (cx != x || cy == yw || (cy & ~yw) != 0 || cy == 0) continue;
          const VarSet w = yw & ~cy;
          const VarSet expected_z = d.axiom == Axiom::kDecomposition ? z : (z | w);
          if (cz == expected_z && same(cx, cy, cz, conclusion)) return true;
        }
      }
      return false;
    }
    case Axiom::kContraction:
    case Axiom::kIntersection: {
      if (d.premises.size() != 2) return false;
      const CIStatement& p1 = set.statement(d.premises[0]);
      const CIStatement& p2 = set.statement(d.premises[1]);
      for (int o1 = 0; o1 < 2; ++o1) {
        for (int o2 = 0; o2 < 2; ++o2) {
          const VarSet x1 = o1 ? p1.y : p1.x, a = o1 ? p1.x : p1.y, g1 = p1.z;
          const VarSet x2 = o2 ? p2.y : p2.x, b = o2 ? p2.x : p2.y, g2 = p2.z;
          if (x1 != x2) continue;
          if (d.axiom == Axiom::kContraction) {
            // p1 = (X|Y|Z), p2 = (X|W|ZY).
            const VarSet y = a, w = b, z = g1;
            if (g2 == (z | y) && !(z & y) && same(x1, y | w, z, conclusion)) return true;
          } else {
            // p1 = (X|W|ZY), p2 = (X|Y|ZW).
            const VarSet w = a, y = b;
            if (!(g1 & y) || (g1 & y) != y) continue;
            const VarSet z = g1 & ~y;
            if (g2 == (z | w) && same(x1, y | w, z, conclusion)) return true;
          }
        }
      }
      return false;
    }
  }
  return false;
}

std::string to_text(const CISet& set) {
  std::ostringstream os;
  os << "# universe:";
  for (const auto& v : set.universe()) os << ' ' << v;
  os << '\n';
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Derivation& d = set.derivation(i);
    os << set.format(set.statement(i)) << "  # [" << i + 1 << "] " << axiom_name(d.axiom);
    for (std::size_t p : d.premises) os << ' ' << p + 1;
    os << '\n';
  }
  return os.str();
}

CISet parse_ci_text(std::string_view text, std::vector<std::string> universe) {
  CISet out(std::move(universe));
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    const std::string body = line.substr(0, hash);
    if (split_ws(body).empty()) continue;
    const CIStatement s = out.parse(body);
    Derivation d;
    if (hash != std::string::npos) {
      const auto words = split_ws(line.substr(hash + 1));
      if (words.size() >= 2 && words[0].front() == '[') {
        d.axiom = parse_axiom(words[1]);
        for (std::size_t k = 2; k < words.size(); ++k) d.premises.push_back(std::stoul(words[k]) - 1);
      }
    }
    out.insert(s, std::move(d));
  }
  return out;
}

std::vector<std::string> observed_universe(int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back("A" + std::to_string(i));
  for (int i = 1; i <= n; ++i) out.push_back("X" + std::to_string(i));
  return out;
}

int outcome_variable(int /*n*/, int slot) { return slot; }
int setting_variable(int n, int slot) { return n + slot; }

JointTable observed_joint(const Phenomenon& p) {
  const auto& s = p.scenario();
  const int n = s.n();
  std::vector<int> cards;
  for (int i = 0; i < n; ++i) cards.push_back(static_cast<int>(s.outcome_count()));
  std::size_t settings_size = 1;
  for (int i = 0; i < n; ++i) {
    cards.push_back(static_cast<int>(s.slot_values(i).size()));
    settings_size *= s.slot_values(i).size();
  }
  std::vector<Rational> table(s.row_size() * settings_size, Rational(0));
  const Rational uniform(1, s.num_contexts());
  for (int c = 0; c < s.num_contexts(); ++c) {
    const Rational& w = p.context_weights() ? (*p.context_weights())[c] : uniform;
    std::size_t x_index = 0;
    const auto slots = s.slots(c);
    for (int i = 0; i < n; ++i) {
      x_index = x_index * s.slot_values(i).size() + s.setting_value_index(i, slots[i]);
    }
    const auto& row = p.row(c);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k] != 0) table[k * settings_size + x_index] = w * row[k];
    }
  }
  return JointTable(observed_universe(n), std::move(cards), std::move(table));
}

CISet nd_statements(int n) {
  CISet out(observed_universe(n));
  const std::uint32_t full = (1u << n) - 1u;
  for (std::uint32_t gamma = 1; gamma < full; ++gamma) {
    VarSet a_gamma = 0, x_gamma = 0, x_rest = 0;
    for (int i = 0; i < n; ++i) {
      if ((gamma >> i) & 1u) {
        a_gamma |= VarSet{1} << outcome_variable(n, i);
        x_gamma |= VarSet{1} << setting_variable(n, i);
      } else {
        x_rest |= VarSet{1} << setting_variable(n, i);
      }
    }
    out.insert({a_gamma, x_rest, x_gamma});
  }
  return out;
}

CISet nd_as_ci(const Phenomenon& p) {
  NdReport report = check_no_disturbance(p);
  if (!report.holds()) throw DisturbanceError(std::move(report));
  return nd_statements(p.scenario().n());
}

}  // namespace ftcausal
