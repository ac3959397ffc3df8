#pragma once
// Check reports.  Every checked inequality becomes a condition entry with a
// stable identifier; failures carry a witness state and both sides of the
// violated inequality so the verdict can be reproduced independently.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "streett/chain.hpp"

namespace streett {

enum class Verdict { Pass, PassOnWindow, Fail };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::PassOnWindow: return "PassOnWindow";
    case Verdict::Fail: return "Fail";
  }
  return "Fail";
}

// Condition identifiers, one per checked inequality.
namespace cond {
inline constexpr const char* kQuantDecrease = "Thm4.1/Eq.61";
inline constexpr const char* kQuantBarrier = "Thm4.1/Eq.62";
inline constexpr const char* kQuantNonneg = "Thm4.1/nonneg";
inline constexpr const char* kQualDecrease = "Thm4.2/Eq.63";
inline constexpr const char* kQualBarrier = "Thm4.2/Eq.64";
inline constexpr const char* kQualMargin = "Thm4.2/Eq.65";
inline constexpr const char* kQualNonneg = "Thm4.2/nonneg";
inline constexpr const char* kDecompScope = "Thm3.5/J-subset";
inline constexpr const char* kDecompEscape = "Thm3.5/Eq.17";
inline constexpr const char* kDecompRecur = "Thm3.5/Eq.18";
inline constexpr const char* kRule1Scope = "Rule1/J-subset";
inline constexpr const char* kRule1Nonneg = "Rule1/nonneg";
inline constexpr const char* kRule1VDecrease = "Rule1/Eq.67";
inline constexpr const char* kRule1VBarrier = "Rule1/Eq.68";
inline constexpr const char* kRule1VMargin = "Rule1/Eq.69";
inline constexpr const char* kRule1WDecrease = "Rule1/Eq.70";
inline constexpr const char* kRule1WPositive = "Rule1/Eq.71";
inline constexpr const char* kRule1WZero = "Rule1/Eq.72";
inline constexpr const char* kRule1Progress = "Rule1/Eq.73";
inline constexpr const char* kRule1Bounded = "Rule1/Eq.74";
inline constexpr const char* kRule1V0Decrease = "Rule1/Eq.75";
inline constexpr const char* kRule1V0Barrier = "Rule1/Eq.76";
inline constexpr const char* kRule2Scope = "Rule2/J-subset";
inline constexpr const char* kRule2Nonneg = "Rule2/nonneg";
inline constexpr const char* kRule2VDecrease = "Rule2/Eq.77";
inline constexpr const char* kRule2VBarrier = "Rule2/Eq.78";
inline constexpr const char* kRule2VMargin = "Rule2/Eq.79";
inline constexpr const char* kRule2WPositive = "Rule2/Eq.80";
inline constexpr const char* kRule2WZero = "Rule2/Eq.81";
inline constexpr const char* kRule2WDecrease = "Rule2/Eq.82";
inline constexpr const char* kRule2Drift = "Rule2/Eq.83";
inline constexpr const char* kRule2PAntitone = "Rule2/Eq.84";
inline constexpr const char* kRule2DAntitone = "Rule2/Eq.85";
inline constexpr const char* kRule2ScalarRange = "Rule2/scalar-range";
inline constexpr const char* kRule2V0Decrease = "Rule2/Eq.86";
inline constexpr const char* kRule2V0Barrier = "Rule2/Eq.87";
}  // namespace cond

template <class S>
struct ConditionResult {
  std::string id;
  std::optional<int> pair_index;  // zero-based Streett pair, when applicable
  Verdict verdict = Verdict::Pass;
  std::optional<S> witness;                 // violating state (smallest), on failure
  std::optional<Rational> lhs, rhs;         // sides of the inequality at the witness
  std::optional<Rational> value;            // condition summary (gamma, sup, inf, ...)
  std::vector<std::pair<Rational, std::optional<Rational>>> per_r;  // r-indexed values
  std::string note;
};

template <class S>
struct CheckReport {
  Verdict verdict = Verdict::Pass;
  std::optional<Rational> bound;  // probability lower bound, when all conditions hold
  std::vector<ConditionResult<S>> conditions;
  std::string window_desc;

  const ConditionResult<S>* find(const std::string& id,
                                 std::optional<int> pair_index = std::nullopt) const {
    for (const auto& c : conditions)
      if (c.id == id && (!pair_index || c.pair_index == pair_index)) return &c;
    return nullptr;
  }

  bool passed() const { return verdict != Verdict::Fail; }

  // First failing condition, if any.
  const ConditionResult<S>* first_failure() const {
    for (const auto& c : conditions)
      if (c.verdict == Verdict::Fail) return &c;
    return nullptr;
  }
};

template <class S>
nlohmann::json report_to_json(const CheckReport<S>& rep) {
  nlohmann::json j;
  j["verdict"] = to_string(rep.verdict);
  if (rep.bound) j["bound"] = format_rational(*rep.bound);
  if (!rep.window_desc.empty()) j["window"] = rep.window_desc;
  j["conditions"] = nlohmann::json::array();
  for (const auto& c : rep.conditions) {
    nlohmann::json e;
    e["id"] = c.id;
    if (c.pair_index) e["pair"] = *c.pair_index + 1;
    e["verdict"] = to_string(c.verdict);
    if (c.witness) e["witness"] = state_to_string<S>(*c.witness);
    if (c.lhs) e["lhs"] = format_rational(*c.lhs);
    if (c.rhs) e["rhs"] = format_rational(*c.rhs);
    if (c.value) e["value"] = format_rational(*c.value);
    if (!c.per_r.empty()) {
      nlohmann::json table = nlohmann::json::array();
      for (const auto& [r, v] : c.per_r) {
        nlohmann::json row;
        row["r"] = format_rational(r);
        if (v) row["value"] = format_rational(*v);
        else row["vacuous"] = true;
        table.push_back(row);
      }
      e["per_r"] = table;
    }
    if (!c.note.empty()) e["note"] = c.note;
    j["conditions"].push_back(e);
  }
  return j;
}

template <class S>
std::string report_to_text(const CheckReport<S>& rep) {
  std::ostringstream out;
  out << "verdict: " << to_string(rep.verdict) << "\n";
  if (rep.bound) out << "bound: " << format_rational(*rep.bound) << "\n";
  if (!rep.window_desc.empty()) out << "window: " << rep.window_desc << "\n";
  for (const auto& c : rep.conditions) {
    out << (c.verdict == Verdict::Fail ? "  [FAIL] " : "  [pass] ") << c.id;
    if (c.pair_index) out << " (pair " << *c.pair_index + 1 << ")";
    if (c.witness) out << " witness " << state_to_string<S>(*c.witness);
    if (c.lhs && c.rhs)
      out << ": " << format_rational(*c.lhs) << " vs " << format_rational(*c.rhs);
    else if (c.value)
      out << ": " << format_rational(*c.value);
    if (!c.note.empty()) out << " (" << c.note << ")";
    out << "\n";
  }
  return out.str();
}

}  // namespace streett
