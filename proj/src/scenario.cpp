#include "ftcausal/scenario.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <sstream>

namespace ftcausal {
namespace {

void check_identifier(const std::string& id, const char* what) {
  if (id.empty()) throw ValidationError(std::string(what) + " identifier is empty");
  if (id.front() == '#') {
    throw ValidationError(std::string(what) + " identifier '" + id +
                          "' uses the reserved '#' prefix");
  }
  for (char c : id) {
    if (c == ',' || c == '|' || c == ' ' || c == '\t' || c == '\n') {
      throw ValidationError(std::string(what) + " identifier '" + id +
                            "' contains a separator character");
    }
  }
}

std::size_t checked_power(std::size_t base, int exponent) {
  std::size_t out = 1;
  for (int i = 0; i < exponent; ++i) {
    if (out > (std::size_t{1} << 40) / std::max<std::size_t>(base, 1)) {
      throw ResourceError("outcome table |O|^n exceeds 2^40 entries");
    }
    out *= base;
  }
  return out;
}

// Backtracking search for a slot per measurement such that no context puts
// two measurements in the same slot.
bool colour_measurements(const Scenario& s, int n, std::vector<int>& colour) {
  const int k = static_cast<int>(s.measurements().size());
  std::vector<std::vector<int>> neighbours(k);
  for (const auto& ctx : s.contexts()) {
    for (int a : ctx) {
      for (int b : ctx) {
        if (a != b) neighbours[a].push_back(b);
      }
    }
  }
  colour.assign(k, -1);
  long budget = 1'000'000;
  auto assign = [&](auto&& self, int m) -> bool {
    if (m == k) return true;
    for (int c = 0; c < n; ++c) {
      if (--budget < 0) return false;
      bool clash = false;
      for (int nb : neighbours[m]) {
        if (colour[nb] == c) {
          clash = true;
          break;
        }
      }
      if (clash) continue;
      colour[m] = c;
      if (self(self, m + 1)) return true;
      colour[m] = -1;
    }
    return false;
  };
  return assign(assign, 0);
}

}  // namespace

Scenario::Scenario(std::vector<std::string> measurements,
                   std::vector<std::string> outcomes,
                   std::vector<std::vector<std::string>> contexts,
                   std::optional<std::vector<std::vector<std::string>>> bell_partition)
    : measurements_(std::move(measurements)), outcomes_(std::move(outcomes)) {
  if (measurements_.empty()) throw ValidationError("scenario has no measurements");
  if (outcomes_.empty()) throw ValidationError("scenario has no outcomes");
  if (contexts.empty()) throw ValidationError("scenario has an empty set of contexts");
  std::set<std::string> seen;
  for (const auto& m : measurements_) {
    check_identifier(m, "measurement");
    if (!seen.insert(m).second) throw ValidationError("duplicate measurement '" + m + "'");
  }
  seen.clear();
  for (const auto& o : outcomes_) {
    if (o.empty()) throw ValidationError("empty outcome label");
    if (!seen.insert(o).second) throw ValidationError("duplicate outcome '" + o + "'");
  }

  std::vector<bool> covered(measurements_.size(), false);
  std::set<std::vector<int>> context_sets;
  for (const auto& ctx : contexts) {
    if (ctx.empty()) throw ValidationError("scenario contains an empty context");
    std::vector<int> idx;
    for (const auto& m : ctx) {
      const int i = measurement_index(m);
      if (std::find(idx.begin(), idx.end(), i) != idx.end()) {
        throw ValidationError("context lists measurement '" + m + "' twice");
      }
      idx.push_back(i);
      covered[i] = true;
    }
    std::vector<int> sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    if (!context_sets.insert(sorted).second) {
      throw ValidationError("duplicate context");
    }
    contexts_.push_back(std::move(idx));
  }
  for (std::size_t i = 0; i < covered.size(); ++i) {
    if (!covered[i]) {
      throw ValidationError("measurement '" + measurements_[i] + "' is in no context");
    }
  }

  if (bell_partition) {
    std::vector<int> party(measurements_.size(), -1);
    std::vector<std::vector<int>> parts;
    for (std::size_t p = 0; p < bell_partition->size(); ++p) {
      std::vector<int> part;
      for (const auto& m : (*bell_partition)[p]) {
        const int i = measurement_index(m);
        if (party[i] != -1) {
          throw ValidationError("Bell partition subsets are not disjoint at '" + m + "'");
        }
        party[i] = static_cast<int>(p);
        part.push_back(i);
      }
      if (part.empty()) throw ValidationError("Bell partition has an empty subset");
      parts.push_back(std::move(part));
    }
    for (std::size_t i = 0; i < party.size(); ++i) {
      if (party[i] == -1) {
        throw ValidationError("Bell partition does not cover '" + measurements_[i] + "'");
      }
    }
    for (const auto& ctx : contexts_) {
      std::set<int> parties;
      for (int m : ctx) {
        if (!parties.insert(party[m]).second) {
          throw ValidationError(
              "a context contains two measurements from the same Bell party");
        }
      }
    }
    bell_partition_ = std::move(parts);
  }
}

int Scenario::measurement_index(std::string_view id) const {
  for (std::size_t i = 0; i < measurements_.size(); ++i) {
    if (measurements_[i] == id) return static_cast<int>(i);
  }
  throw ValidationError("unknown measurement '" + std::string(id) + "'");
}

int Scenario::outcome_index(std::string_view label) const {
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    if (outcomes_[i] == label) return static_cast<int>(i);
  }
  throw ValidationError("unknown outcome '" + std::string(label) + "'");
}

std::size_t Scenario::max_context_size() const {
  std::size_t n = 0;
  for (const auto& c : contexts_) n = std::max(n, c.size());
  return n;
}

std::optional<int> Scenario::find_context(std::span<const int> measurements) const {
  std::vector<int> want(measurements.begin(), measurements.end());
  std::sort(want.begin(), want.end());
  for (std::size_t c = 0; c < contexts_.size(); ++c) {
    std::vector<int> have = contexts_[c];
    std::sort(have.begin(), have.end());
    if (have == want) return static_cast<int>(c);
  }
  return std::nullopt;
}

IndexSubset IndexSubset::from_one_based(std::initializer_list<int> slots) {
  std::uint32_t mask = 0;
  for (int s : slots) {
    if (s < 1 || s > 31) throw ValidationError("slot index out of range");
    mask |= 1u << (s - 1);
  }
  return IndexSubset(mask);
}

int IndexSubset::size() const { return std::popcount(mask_); }

std::vector<int> IndexSubset::slots() const {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i) {
    if (contains(i)) out.push_back(i);
  }
  return out;
}

std::string IndexSubset::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int s : slots()) {
    if (!first) os << ',';
    os << s + 1;
    first = false;
  }
  os << '}';
  return os.str();
}

int PaddedScenario::setting_value_index(int slot, int measurement) const {
  const auto& values = slot_values_.at(slot);
  auto it = std::find(values.begin(), values.end(), measurement);
  if (it == values.end()) {
    throw ValidationError("measurement " + measurement_label(measurement) +
                          " never occupies slot " + std::to_string(slot + 1));
  }
  return static_cast<int>(it - values.begin());
}

std::optional<int> PaddedScenario::context_for_settings(
    std::span<const int> setting_values) const {
  for (int c = 0; c < num_contexts(); ++c) {
    bool match = true;
    for (int i = 0; i < n_ && match; ++i) {
      match = slot_values_[i][setting_values[i]] == slots_[c][i];
    }
    if (match) return c;
  }
  return std::nullopt;
}

bool PaddedScenario::measurements_have_fixed_slots() const {
  std::map<int, int> slot_of;
  for (const auto& ctx : slots_) {
    for (int i = 0; i < n_; ++i) {
      if (ctx[i] == kTrivialMeasurement) continue;
      auto [it, inserted] = slot_of.emplace(ctx[i], i);
      if (!inserted && it->second != i) return false;
    }
  }
  return true;
}

std::string PaddedScenario::measurement_label(int measurement) const {
  if (measurement == kTrivialMeasurement) return std::string(kTrivialMeasurementId);
  return base_.measurements().at(measurement);
}

std::size_t PaddedScenario::encode_outcomes(std::span<const int> outcomes) const {
  std::size_t index = 0;
  for (int i = 0; i < n_; ++i) index = index * outcome_count() + outcomes[i];
  return index;
}

std::vector<int> PaddedScenario::decode_outcomes(std::size_t index) const {
  std::vector<int> out(n_);
  for (int i = n_ - 1; i >= 0; --i) {
    out[i] = static_cast<int>(index % outcome_count());
    index /= outcome_count();
  }
  return out;
}

PaddedScenario pad_scenario(const Scenario& s) {
  PaddedScenario out(s);
  int n = static_cast<int>(s.max_context_size());
  const auto& contexts = s.contexts();

  std::vector<int> fixed_slot;
  if (s.bell_partition()) {
    // A party count above the largest context still gets one slot each.
    n = std::max(n, static_cast<int>(s.bell_partition()->size()));
    fixed_slot.assign(s.measurements().size(), -1);
    for (std::size_t p = 0; p < s.bell_partition()->size(); ++p) {
      for (int m : (*s.bell_partition())[p]) fixed_slot[m] = static_cast<int>(p);
    }
  } else if (!colour_measurements(s, n, fixed_slot)) {
    fixed_slot.clear();
  }

  out.n_ = n;
  out.row_size_ = checked_power(s.outcomes().size(), n);
  for (const auto& ctx : contexts) {
    std::vector<int> slots(n, kTrivialMeasurement);
    if (!fixed_slot.empty()) {
      for (int m : ctx) slots[fixed_slot[m]] = m;
    } else {
      std::vector<int> sorted = ctx;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < sorted.size(); ++i) slots[i] = sorted[i];
    }
    out.slots_.push_back(std::move(slots));
  }
  out.slot_values_.resize(n);
  for (int i = 0; i < n; ++i) {
    std::set<int> values;
    for (const auto& ctx : out.slots_) values.insert(ctx[i]);
    out.slot_values_[i].assign(values.begin(), values.end());
  }
  return out;
}

Phenomenon::Phenomenon(PaddedScenario scenario, std::vector<std::vector<Rational>> padded_rows,
                       std::optional<std::vector<Rational>> context_weights)
    : scenario_(std::move(scenario)),
      rows_(std::move(padded_rows)),
      context_weights_(std::move(context_weights)) {
  const int contexts = scenario_.num_contexts();
  if (static_cast<int>(rows_.size()) != contexts) {
    throw ValidationError("phenomenon has " + std::to_string(rows_.size()) +
                          " rows for " + std::to_string(contexts) + " contexts");
  }
  for (int c = 0; c < contexts; ++c) {
    const auto& row = rows_[c];
    if (row.size() != scenario_.row_size()) {
      throw ValidationError("phenomenon row has the wrong length");
    }
    const auto slots = scenario_.slots(c);
    Rational total = 0;
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k] < 0) throw ValidationError("negative probability in phenomenon");
      const auto outcomes = scenario_.decode_outcomes(k);
      for (int i = 0; i < scenario_.n(); ++i) {
        if (slots[i] == kTrivialMeasurement && outcomes[i] != 0 && row[k] != 0) {
          throw ValidationError("trivial measurement with a non-trivial outcome");
        }
      }
      total += row[k];
    }
    if (total != 1) {
      throw ValidationError("outcome probabilities of context " + std::to_string(c + 1) +
                            " sum to " + to_display_string(total) + ", not 1");
    }
  }
  if (context_weights_) {
    if (static_cast<int>(context_weights_->size()) != contexts) {
      throw ValidationError("context weight count does not match the context count");
    }
    Rational total = 0;
    for (const auto& w : *context_weights_) {
      if (w < 0) throw ValidationError("negative context weight");
      total += w;
    }
    if (total != 1) throw ValidationError("context weights do not sum to 1");
  }
}

Phenomenon Phenomenon::from_context_rows(PaddedScenario scenario,
                                         const std::vector<std::vector<Rational>>& rows,
                                         std::optional<std::vector<Rational>> context_weights) {
  const int contexts = scenario.num_contexts();
  if (static_cast<int>(rows.size()) != contexts) {
    throw ValidationError("phenomenon lists " + std::to_string(rows.size()) +
                          " context rows for " + std::to_string(contexts) + " contexts");
  }
  const std::size_t base = scenario.outcome_count();
  std::vector<std::vector<Rational>> padded(contexts);
  for (int c = 0; c < contexts; ++c) {
    const auto& declared = scenario.base().contexts()[c];
    const std::size_t expected = checked_power(base, static_cast<int>(declared.size()));
    if (rows[c].size() != expected) {
      throw ValidationError("context " + std::to_string(c + 1) + " row has " +
                            std::to_string(rows[c].size()) + " entries, expected " +
                            std::to_string(expected));
    }
    const auto slots = scenario.slots(c);
    std::vector<int> slot_of(declared.size());
    for (std::size_t j = 0; j < declared.size(); ++j) {
      slot_of[j] = static_cast<int>(std::find(slots.begin(), slots.end(), declared[j]) -
                                    slots.begin());
    }
    padded[c].assign(scenario.row_size(), Rational(0));
    std::vector<int> outcomes(scenario.n(), 0);
    for (std::size_t k = 0; k < expected; ++k) {
      std::size_t rest = k;
      for (int j = static_cast<int>(declared.size()) - 1; j >= 0; --j) {
        outcomes[slot_of[j]] = static_cast<int>(rest % base);
        rest /= base;
      }
      padded[c][scenario.encode_outcomes(outcomes)] = rows[c][k];
    }
  }
  return Phenomenon(std::move(scenario), std::move(padded), std::move(context_weights));
}

std::vector<Rational> Phenomenon::context_row(int context) const {
  const auto& declared = scenario_.base().contexts().at(context);
  const auto slots = scenario_.slots(context);
  const std::size_t base = scenario_.outcome_count();
  std::size_t count = 1;
  for (std::size_t j = 0; j < declared.size(); ++j) count *= base;
  std::vector<Rational> out(count);
  std::vector<int> outcomes(scenario_.n(), 0);
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t rest = k;
    for (int j = static_cast<int>(declared.size()) - 1; j >= 0; --j) {
      const int slot = static_cast<int>(
          std::find(slots.begin(), slots.end(), declared[j]) - slots.begin());
      outcomes[slot] = static_cast<int>(rest % base);
      rest /= base;
    }
    out[k] = rows_[context][scenario_.encode_outcomes(outcomes)];
  }
  return out;
}

Rational Phenomenon::probability(std::span<const int> measurements,
                                 std::span<const int> outcomes) const {
  if (measurements.size() != outcomes.size()) {
    throw ValidationError("measurement and outcome tuples differ in length");
  }
  const auto context = scenario_.base().find_context(measurements);
  if (!context) throw ValidationError("no context with the given measurements");
  const auto slots = scenario_.slots(*context);
  std::vector<int> padded(scenario_.n(), 0);
  for (std::size_t j = 0; j < measurements.size(); ++j) {
    const int slot = static_cast<int>(
        std::find(slots.begin(), slots.end(), measurements[j]) - slots.begin());
    if (outcomes[j] < 0 || outcomes[j] >= static_cast<int>(scenario_.outcome_count())) {
      throw ValidationError("outcome index out of range");
    }
    padded[slot] = outcomes[j];
  }
  return rows_[*context][scenario_.encode_outcomes(padded)];
}

namespace {

// Marginal over an ordered list of slots.
std::vector<Rational> marginal_over(const Phenomenon& p, const std::vector<int>& slots,
                                    int context) {
  const auto& s = p.scenario();
  const std::size_t base = s.outcome_count();
  std::size_t size = 1;
  for (std::size_t j = 0; j < slots.size(); ++j) size *= base;
  std::vector<Rational> out(size, Rational(0));
  const auto& row = p.row(context);
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (row[k] == 0) continue;
    const auto outcomes = s.decode_outcomes(k);
    std::size_t idx = 0;
    for (int slot : slots) idx = idx * base + outcomes[slot];
    out[idx] += row[k];
  }
  return out;
}

}  // namespace

std::vector<Rational> marginal(const Phenomenon& p, IndexSubset gamma, int context) {
  if (context < 0 || context >= p.scenario().num_contexts()) {
    throw ValidationError("context index out of range");
  }
  if (gamma.mask() >> p.scenario().n()) {
    throw ValidationError("index subset " + gamma.to_string() + " is not within {1.." +
                          std::to_string(p.scenario().n()) + "}");
  }
  return marginal_over(p, gamma.slots(), context);
}

NdReport check_no_disturbance(const Phenomenon& p) {
  NdReport report;
  const auto& s = p.scenario();
  const int contexts = s.num_contexts();
  const std::size_t base = s.outcome_count();
  for (int a = 0; a < contexts; ++a) {
    for (int b = a + 1; b < contexts; ++b) {
      const auto sa = s.slots(a);
      const auto sb = s.slots(b);
      // Shared non-trivial measurements with their slot in each context.
      std::vector<std::pair<int, int>> shared_slots;
      std::vector<int> shared;
      for (int i = 0; i < s.n(); ++i) {
        if (sa[i] == kTrivialMeasurement) continue;
        for (int j = 0; j < s.n(); ++j) {
          if (sb[j] == sa[i]) {
            shared_slots.emplace_back(i, j);
            shared.push_back(sa[i]);
          }
        }
      }
      const std::uint32_t subsets = 1u << shared.size();
      for (std::uint32_t t = 1; t < subsets; ++t) {
        std::vector<int> slots_a, slots_b, measurements;
        std::uint32_t mask_a = 0, mask_b = 0;
        for (std::size_t k = 0; k < shared.size(); ++k) {
          if (!((t >> k) & 1u)) continue;
          slots_a.push_back(shared_slots[k].first);
          slots_b.push_back(shared_slots[k].second);
          measurements.push_back(shared[k]);
          mask_a |= 1u << shared_slots[k].first;
          mask_b |= 1u << shared_slots[k].second;
        }
        const auto lhs = marginal_over(p, slots_a, a);
        const auto rhs = marginal_over(p, slots_b, b);
        for (std::size_t k = 0; k < lhs.size(); ++k) {
          if (lhs[k] == rhs[k]) continue;
          NdViolation v;
          v.gamma = IndexSubset(mask_a);
          v.gamma_other = IndexSubset(mask_b);
          v.context_a = a;
          v.context_b = b;
          v.measurements = measurements;
          v.outcomes.resize(measurements.size());
          std::size_t rest = k;
          for (int j = static_cast<int>(measurements.size()) - 1; j >= 0; --j) {
            v.outcomes[j] = static_cast<int>(rest % base);
            rest /= base;
          }
          v.lhs = lhs[k];
          v.rhs = rhs[k];
          report.violations.push_back(std::move(v));
        }
      }
    }
  }
  return report;
}

DisturbanceError::DisturbanceError(NdReport report)
    : PreconditionError("phenomenon violates no-disturbance (" +
                        std::to_string(report.violations.size()) + " violated marginals)"),
      report_(std::move(report)) {}

std::string describe(const PaddedScenario& s, const NdViolation& v) {
  auto context_text = [&](int c) {
    std::string out = "(";
    const auto slots = s.slots(c);
    for (int i = 0; i < s.n(); ++i) {
      if (i) out += ",";
      out += s.measurement_label(slots[i]);
    }
    return out + ")";
  };
  std::ostringstream os;
  os << "gamma=" << v.gamma.to_string() << " contexts " << context_text(v.context_a)
     << " vs " << context_text(v.context_b) << " outcome ";
  for (std::size_t j = 0; j < v.measurements.size(); ++j) {
    if (j) os << ",";
    os << s.measurement_label(v.measurements[j]) << '='
       << s.base().outcomes()[v.outcomes[j]];
  }
  os << ": " << to_display_string(v.lhs) << " != " << to_display_string(v.rhs);
  return os.str();
}

}  // namespace ftcausal
