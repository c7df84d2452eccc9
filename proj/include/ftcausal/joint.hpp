#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ftcausal/rational.hpp"

namespace ftcausal {

// Bitmask over the variables of a JointTable.
using VarSet = std::uint64_t;

// Exact joint distribution over finite variables. Entries are laid out in
// mixed radix with the first variable most significant.
class JointTable {
 public:
  JointTable(std::vector<std::string> names, std::vector<int> cardinalities,
             std::vector<Rational> probabilities);

  std::size_t num_variables() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<int>& cardinalities() const { return cards_; }
  const std::vector<Rational>& probabilities() const { return probs_; }
  int variable_index(std::string_view name) const;
  VarSet names_to_set(const std::vector<std::string>& names) const;
  VarSet all() const { return (VarSet{1} << names_.size()) - 1; }

  // Marginal over `keep`, variables in their original relative order.
  JointTable marginal(VarSet keep) const;
  bool strictly_positive() const;

  bool operator==(const JointTable&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<int> cards_;
  std::vector<Rational> probs_;
};

}  // namespace ftcausal
