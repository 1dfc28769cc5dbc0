#include "qmon/precision.hpp"

#include <json.hpp>

namespace qmon {

std::string to_string(Relation r) {
  switch (r) {
    case Relation::MorePrecise:
      return "more-precise";
    case Relation::LessPrecise:
      return "less-precise";
    case Relation::EquallyPrecise:
      return "equally-precise";
    case Relation::Incomparable:
      return "incomparable";
    case Relation::Undetermined:
      return "undetermined";
  }
  return "?";
}

std::string to_string(TraceRelation r) {
  switch (r) {
    case TraceRelation::FirstBetter:
      return "v1";
    case TraceRelation::SecondBetter:
      return "v2";
    case TraceRelation::Equal:
      return "equal";
    case TraceRelation::Incomparable:
      return "incomparable";
    case TraceRelation::Undetermined:
      return "undetermined";
  }
  return "?";
}

PrecisionReport compare(const VerdictFunction& v1, const VerdictFunction& v2, const std::vector<LassoTrace>& suite,
                        Side side, const LimitBudget& budget, std::string suiteName) {
  if (!(v1.codomain() == v2.codomain())) {
    throw DomainError("cannot compare verdicts over " + v1.codomain().name() + " and " + v2.codomain().name());
  }
  const ValueDomain& d = v1.codomain();
  PrecisionReport rep;
  rep.side = side;
  rep.suite = std::move(suiteName);
  for (const auto& t : suite) {
    PrecisionRow row{t, eval_limit(v1, t, side, budget), eval_limit(v2, t, side, budget), TraceRelation::Undetermined};
    if (!row.limit1.resolved() || !row.limit2.resolved()) {
      rep.unresolved.push_back(t);
    } else {
      Order o = compare(d, *row.limit1.value, *row.limit2.value);
      if (side == Side::Above && o == Order::Less) {
        o = Order::Greater;
      } else if (side == Side::Above && o == Order::Greater) {
        o = Order::Less;
      }
      switch (o) {
        case Order::Greater:
          row.relation = TraceRelation::FirstBetter;
          if (!rep.firstBetter) rep.firstBetter = t;
          break;
        case Order::Less:
          row.relation = TraceRelation::SecondBetter;
          if (!rep.secondBetter) rep.secondBetter = t;
          break;
        case Order::Equal:
          row.relation = TraceRelation::Equal;
          break;
        case Order::Incomparable:
          row.relation = TraceRelation::Incomparable;
          if (!rep.incomparable) rep.incomparable = t;
          break;
      }
    }
    rep.rows.push_back(std::move(row));
  }
  if (rep.incomparable || (rep.firstBetter && rep.secondBetter)) {
    rep.relation = Relation::Incomparable;
  } else if (!rep.unresolved.empty()) {
    rep.relation = Relation::Undetermined;
  } else if (rep.firstBetter) {
    rep.relation = Relation::MorePrecise;
  } else if (rep.secondBetter) {
    rep.relation = Relation::LessPrecise;
  } else {
    rep.relation = Relation::EquallyPrecise;
  }
  return rep;
}

std::string to_json_lines(const PrecisionReport& r) {
  using nlohmann::json;
  std::string out;
  for (const auto& row : r.rows) {
    json j;
    j["trace"] = render_lasso(row.trace);
    j["limit_v1"] = render_limit(row.limit1);
    j["limit_v2"] = render_limit(row.limit2);
    j["relation"] = to_string(row.relation);
    out += j.dump() + "\n";
  }
  json s;
  s["summary"] = true;
  s["relation"] = to_string(r.relation);
  s["side"] = to_string(r.side);
  s["suite"] = r.suite;
  s["traces"] = r.rows.size();
  s["unresolved"] = r.unresolved.size();
  auto opt = [](const std::optional<LassoTrace>& t) { return t ? json(render_lasso(*t)) : json(nullptr); };
  s["witness_v1_better"] = opt(r.firstBetter);
  s["witness_v2_better"] = opt(r.secondBetter);
  s["witness_incomparable"] = opt(r.incomparable);
  out += s.dump() + "\n";
  return out;
}

std::vector<HierarchyStep> hierarchy_experiment(const std::vector<VerdictFunction>& family,
                                                const std::vector<LassoTrace>& suite, Side side,
                                                const LimitBudget& budget) {
  std::vector<HierarchyStep> steps;
  for (std::size_t i = 1; i < family.size(); ++i) {
    steps.push_back({family[i - 1].name(), family[i].name(),
                     compare(family[i], family[i - 1], suite, side, budget, "hierarchy")});
  }
  return steps;
}

}  // namespace qmon
