#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ftcausal/error.hpp"
#include "ftcausal/rational.hpp"

namespace ftcausal {

// Index used in slot assignments for the measurement injected by padding.
inline constexpr int kTrivialMeasurement = -1;
// Reserved identifier of the trivial measurement; user ids may not start
// with '#'.
inline constexpr std::string_view kTrivialMeasurementId = "#trivial";

// Measurements, a shared outcome set, and the compatibility structure.
// Contexts keep the measurement order in which they were declared; that
// order is the row layout of phenomenon documents.
class Scenario {
 public:
  Scenario(std::vector<std::string> measurements,
           std::vector<std::string> outcomes,
           std::vector<std::vector<std::string>> contexts,
           std::optional<std::vector<std::vector<std::string>>> bell_partition =
               std::nullopt);

  const std::vector<std::string>& measurements() const { return measurements_; }
  const std::vector<std::string>& outcomes() const { return outcomes_; }
  const std::vector<std::vector<int>>& contexts() const { return contexts_; }
  const std::optional<std::vector<std::vector<int>>>& bell_partition() const {
    return bell_partition_;
  }

  int measurement_index(std::string_view id) const;
  int outcome_index(std::string_view label) const;
  std::size_t max_context_size() const;

  // Context whose measurement set equals `measurements` (any order).
  std::optional<int> find_context(std::span<const int> measurements) const;

  bool operator==(const Scenario&) const = default;

 private:
  std::vector<std::string> measurements_;
  std::vector<std::string> outcomes_;
  std::vector<std::vector<int>> contexts_;
  std::optional<std::vector<std::vector<int>>> bell_partition_;
};

// A subset of the slot index set {1..n}. Stored 0-based as a bitmask;
// printed 1-based.
class IndexSubset {
 public:
  IndexSubset() = default;
  explicit IndexSubset(std::uint32_t mask) : mask_(mask) {}

  static IndexSubset from_one_based(std::initializer_list<int> slots);
  static IndexSubset all(int n) { return IndexSubset((1u << n) - 1u); }

  std::uint32_t mask() const { return mask_; }
  bool contains(int slot) const { return (mask_ >> slot) & 1u; }
  bool empty() const { return mask_ == 0; }
  int size() const;
  std::vector<int> slots() const;
  std::string to_string() const;

  bool operator==(const IndexSubset&) const = default;

 private:
  std::uint32_t mask_ = 0;
};

// A scenario whose contexts all have exactly n slots. Slot i of a context
// holds the setting variable X_i and the outcome variable A_i of a run in
// that context; unused slots hold the trivial measurement, whose single
// outcome is outcome index 0.
class PaddedScenario {
 public:
  const Scenario& base() const { return base_; }
  int n() const { return n_; }
  int num_contexts() const { return static_cast<int>(slots_.size()); }
  std::size_t outcome_count() const { return base_.outcomes().size(); }
  // |O|^n, the length of every padded table row.
  std::size_t row_size() const { return row_size_; }

  // Measurement index (or kTrivialMeasurement) per slot.
  std::span<const int> slots(int context) const { return slots_.at(context); }
  // Values that setting X_slot takes across contexts, ascending, so the
  // trivial measurement comes first when present.
  std::span<const int> slot_values(int slot) const { return slot_values_.at(slot); }
  int setting_value_index(int slot, int measurement) const;
  // Context selected by a tuple of setting value indices, if any.
  std::optional<int> context_for_settings(std::span<const int> setting_values) const;
  // True iff every measurement occupies the same slot in every context.
  bool measurements_have_fixed_slots() const;
  std::string measurement_label(int measurement) const;

  // Padded outcome tuple <-> row index (slot 1 most significant).
  std::size_t encode_outcomes(std::span<const int> outcomes) const;
  std::vector<int> decode_outcomes(std::size_t index) const;

  bool operator==(const PaddedScenario&) const = default;

 private:
  friend PaddedScenario pad_scenario(const Scenario& s);
  explicit PaddedScenario(Scenario base) : base_(std::move(base)) {}

  Scenario base_;
  int n_ = 0;
  std::size_t row_size_ = 0;
  std::vector<std::vector<int>> slots_;
  std::vector<std::vector<int>> slot_values_;
};

// Deterministic padding. Bell scenarios put party i in slot i. Otherwise
// each measurement is given one fixed slot when the contexts admit such a
// colouring; failing that, each context fills slots in measurement
// declaration order.
PaddedScenario pad_scenario(const Scenario& s);

// Exact conditional distribution P(A|X), one padded row per context.
class Phenomenon {
 public:
  Phenomenon(PaddedScenario scenario, std::vector<std::vector<Rational>> padded_rows,
             std::optional<std::vector<Rational>> context_weights = std::nullopt);

  // Rows laid out over each context's declared measurement order, |O|^|c|
  // entries each (last measurement varies fastest).
  static Phenomenon from_context_rows(
      PaddedScenario scenario, const std::vector<std::vector<Rational>>& rows,
      std::optional<std::vector<Rational>> context_weights = std::nullopt);

  const PaddedScenario& scenario() const { return scenario_; }
  const std::vector<Rational>& row(int context) const { return rows_.at(context); }
  const std::optional<std::vector<Rational>>& context_weights() const {
    return context_weights_;
  }

  // Inverse of the padding embedding: the declared-order row of a context.
  std::vector<Rational> context_row(int context) const;

  // P(outcomes | measurements) for a context given as a measurement set in
  // any order; `outcomes` aligns with `measurements`.
  Rational probability(std::span<const int> measurements,
                       std::span<const int> outcomes) const;

  bool operator==(const Phenomenon&) const = default;

 private:
  PaddedScenario scenario_;
  std::vector<std::vector<Rational>> rows_;
  std::optional<std::vector<Rational>> context_weights_;
};

// Marginal P(A_gamma | context) as a table over |O|^|gamma| entries, slots
// of gamma in ascending order.
std::vector<Rational> marginal(const Phenomenon& p, IndexSubset gamma, int context);

struct NdViolation {
  IndexSubset gamma;        // slots of the shared measurements in context_a
  IndexSubset gamma_other;  // the same measurements' slots in context_b
  int context_a = 0;
  int context_b = 0;
  std::vector<int> measurements;
  std::vector<int> outcomes;
  Rational lhs;  // marginal in context_a
  Rational rhs;  // marginal in context_b
};

struct NdReport {
  std::vector<NdViolation> violations;
  bool holds() const { return violations.empty(); }
};

// Compares, for every pair of contexts and every non-empty set of
// measurements they share, the marginal outcome distributions of those
// measurements. Exact; subsumes the slot-wise comparison because contexts
// agreeing on slots gamma share the measurements in those slots.
NdReport check_no_disturbance(const Phenomenon& p);

class DisturbanceError : public PreconditionError {
 public:
  explicit DisturbanceError(NdReport report);
  const NdReport& report() const { return report_; }

 private:
  NdReport report_;
};

std::string describe(const PaddedScenario& s, const NdViolation& v);

}  // namespace ftcausal
