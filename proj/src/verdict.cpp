#include "depord/verdict.hpp"

#include <array>
#include <string>

#include "depord/common.hpp"

namespace depord {

namespace {
constexpr std::array<std::string_view, 5> kNames{"LessEq", "GreaterEq", "Equal", "Incomparable",
                                                 "MarginalMismatch"};
}

std::string_view to_string(Verdict v) { return kNames[static_cast<std::size_t>(v)]; }

Verdict verdict_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (kNames[i] == name) return static_cast<Verdict>(i);
  throw InputError("unknown verdict '" + std::string(name) + "'");
}

Verdict reversed(Verdict v) {
  switch (v) {
    case Verdict::LessEq:
      return Verdict::GreaterEq;
    case Verdict::GreaterEq:
      return Verdict::LessEq;
    default:
      return v;
  }
}

Verdict verdict_from_excess(double lhs_over_rhs, double rhs_over_lhs, double tol) {
  const bool le = lhs_over_rhs <= tol;
  const bool ge = rhs_over_lhs <= tol;
  if (le && ge) return Verdict::Equal;
  if (le) return Verdict::LessEq;
  if (ge) return Verdict::GreaterEq;
  return Verdict::Incomparable;
}

Verdict combine(Verdict acc, Verdict next) {
  if (acc == Verdict::MarginalMismatch || next == Verdict::MarginalMismatch) return Verdict::MarginalMismatch;
  if (acc == Verdict::Equal) return next;
  if (next == Verdict::Equal || next == acc) return acc;
  return Verdict::Incomparable;
}

}  // namespace depord
