#include "ftcausal/joint.hpp"

#include <set>

#include "ftcausal/error.hpp"

namespace ftcausal {

JointTable::JointTable(std::vector<std::string> names, std::vector<int> cardinalities,
                       std::vector<Rational> probabilities)
    : names_(std::move(names)), cards_(std::move(cardinalities)), probs_(std::move(probabilities)) {
  if (names_.size() != cards_.size()) throw ValidationError("joint: name/cardinality mismatch");
  if (names_.size() > 63) throw ValidationError("joint: too many variables");
  std::set<std::string> seen;
  std::size_t size = 1;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!seen.insert(names_[i]).second) {
      throw ValidationError("joint: duplicate variable '" + names_[i] + "'");
    }
    if (cards_[i] < 1) throw ValidationError("joint: non-positive cardinality");
    size *= static_cast<std::size_t>(cards_[i]);
  }
  if (probs_.size() != size) throw ValidationError("joint: table size mismatch");
  Rational total = 0;
  for (const auto& p : probs_) {
    if (p < 0) throw ValidationError("joint: negative probability");
    total += p;
  }
  if (total != 1) throw ValidationError("joint: probabilities sum to " + to_display_string(total));
}

int JointTable::variable_index(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<int>(i);
  }
  throw ValidationError("unknown variable '" + std::string(name) + "'");
}

VarSet JointTable::names_to_set(const std::vector<std::string>& names) const {
  VarSet out = 0;
  for (const auto& n : names) out |= VarSet{1} << variable_index(n);
  return out;
}

JointTable JointTable::marginal(VarSet keep) const {
  if (keep & ~all()) throw ValidationError("marginal over unknown variables");
  std::vector<std::string> names;
  std::vector<int> cards;
  // Stride of each original variable inside the marginal (0 if summed out).
  std::vector<std::size_t> stride(names_.size(), 0);
  std::size_t size = 1;
  for (int i = static_cast<int>(names_.size()) - 1; i >= 0; --i) {
    if ((keep >> i) & 1u) {
      stride[i] = size;
      size *= static_cast<std::size_t>(cards_[i]);
    }
  }
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if ((keep >> i) & 1u) {
      names.push_back(names_[i]);
      cards.push_back(cards_[i]);
    }
  }
  std::vector<Rational> out(size, Rational(0));
  std::vector<int> digit(names_.size(), 0);
  std::size_t target = 0;
  for (std::size_t flat = 0; flat < probs_.size(); ++flat) {
    if (probs_[flat] != 0) out[target] += probs_[flat];
    // Odometer increment, last variable fastest.
    for (int i = static_cast<int>(names_.size()) - 1; i >= 0; --i) {
      target += stride[i];
      if (++digit[i] < cards_[i]) break;
      target -= stride[i] * static_cast<std::size_t>(cards_[i]);
      digit[i] = 0;
    }
  }
  return JointTable(std::move(names), std::move(cards), std::move(out));
}

bool JointTable::strictly_positive() const {
  for (const auto& p : probs_) {
    if (p <= 0) return false;
  }
  return true;
}

}  // namespace ftcausal
