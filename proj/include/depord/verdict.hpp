#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace depord {

enum class Verdict { LessEq, GreaterEq, Equal, Incomparable, MarginalMismatch };

std::string_view to_string(Verdict v);
/// Parses the names produced by to_string; throws InputError otherwise.
Verdict verdict_from_string(std::string_view name);
/// Swaps LessEq and GreaterEq.
Verdict reversed(Verdict v);

/// Verdict from the largest one-sided excesses d1 = max(lhs - rhs) and
/// d2 = max(rhs - lhs) of two curves compared pointwise.
Verdict verdict_from_excess(double lhs_over_rhs, double rhs_over_lhs, double tol);

/// Combines per-level verdicts: Equal is neutral, LessEq together with
/// GreaterEq (or any Incomparable) gives Incomparable.
Verdict combine(Verdict acc, Verdict next);

/// Where the comparison fails in one direction: at level v and abscissa x the
/// left model's curve (lhs) exceeds the right model's (rhs).
struct Witness {
  double level = 0.0;
  double x = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct LevelDetail {
  double level = 0.0;
  Verdict verdict = Verdict::Equal;
  /// max over x of (A-curve minus B-curve), and of (B-curve minus A-curve).
  double max_a_over_b = 0.0;
  double max_b_over_a = 0.0;
};

/// Outcome of comparing two models (Y, X) and (Y', X').
struct ComparisonResult {
  Verdict verdict = Verdict::Equal;
  /// Present iff verdict == Incomparable: largest violation of A <= B ...
  std::optional<Witness> witness;
  /// ... and of B <= A.
  std::optional<Witness> reverse_witness;
  double tol = 0.0;
  std::vector<LevelDetail> per_level;
  /// "exact" for characterisations, "sufficient" when only a sufficient
  /// criterion was checked (a LessEq there implies ccx LessEq, not conversely).
  std::string criterion = "exact";
};

}  // namespace depord
