#pragma once

// Precision order between verdict functions, evaluated over a lasso suite.

#include <optional>
#include <string>
#include <vector>

#include "qmon/verdict.hpp"

namespace qmon {

enum class Relation { MorePrecise, LessPrecise, EquallyPrecise, Incomparable, Undetermined };
std::string to_string(Relation r);

/// How the two limits compare on one trace.
enum class TraceRelation { FirstBetter, SecondBetter, Equal, Incomparable, Undetermined };
std::string to_string(TraceRelation r);

struct PrecisionRow {
  LassoTrace trace;
  LimitResult limit1;
  LimitResult limit2;
  TraceRelation relation;
};

struct PrecisionReport {
  Relation relation = Relation::Undetermined;
  Side side = Side::Below;
  std::string suite;
  /// A trace where v1 is strictly better (MorePrecise, Incomparable).
  std::optional<LassoTrace> firstBetter;
  /// A trace where v2 is strictly better (LessPrecise, Incomparable).
  std::optional<LassoTrace> secondBetter;
  /// A trace with order-incomparable limits.
  std::optional<LassoTrace> incomparable;
  std::vector<LassoTrace> unresolved;
  std::vector<PrecisionRow> rows;
};

/// Relation of v1 to v2 from the given side: from below a larger limsup is
/// more precise, from above a smaller liminf. Claims are relative to the
/// suite. Throws DomainError when the codomains differ.
PrecisionReport compare(const VerdictFunction& v1, const VerdictFunction& v2, const std::vector<LassoTrace>& suite,
                        Side side, const LimitBudget& budget = {}, std::string suiteName = "");

/// One JSON object per trace ({trace, limit_v1, limit_v2, relation}) and a
/// final summary object.
std::string to_json_lines(const PrecisionReport& r);

struct HierarchyStep {
  std::string lower;
  std::string upper;
  PrecisionReport report;
};

/// Compares each member of an ordered family with its predecessor
/// (family[i+1] against family[i]).
std::vector<HierarchyStep> hierarchy_experiment(const std::vector<VerdictFunction>& family,
                                                const std::vector<LassoTrace>& suite, Side side,
                                                const LimitBudget& budget = {});

}  // namespace qmon
