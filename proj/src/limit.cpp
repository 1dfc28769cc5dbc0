// Limit detection along lasso traces.
//
// The verdict is run over the stem and then loop iteration by loop iteration.
// Each iteration is summarised by the supremum (limsup) or infimum (liminf)
// of the verdict values observed inside it, and the sequence of summaries is
// inspected for a recognisable eventual shape: constant, periodic, arithmetic
// or geometric divergence, or a rational function of the iteration index.
// A shape first recognised after k iterations is only reported once it is
// still recognised, with the same value, after 2k iterations; this rejects
// transients shorter than the prefix already observed.

#include <algorithm>
#include <array>

#include "qmon/verdict.hpp"

namespace qmon {

std::string to_string(LimitKind k) {
  switch (k) {
    case LimitKind::Exact:
      return "exact";
    case LimitKind::NumericTolerance:
      return "tolerance";
    case LimitKind::Converged:
      return "converged";
    case LimitKind::DivergedToTop:
      return "diverged-top";
    case LimitKind::DivergedToBottom:
      return "diverged-bottom";
    case LimitKind::Undetermined:
      return "undetermined";
  }
  return "?";
}

std::string render_limit(const LimitResult& r) {
  if (!r.value) return "undetermined";
  return to_string(*r.value);
}

std::string to_string(Side s) { return s == Side::Below ? "below" : "above"; }

namespace {

using Summary = std::optional<ExtendedValue>;

LimitResult undetermined() { return LimitResult{std::nullopt, LimitKind::Undetermined, 0}; }

bool all_resolved(const std::vector<Summary>& s, std::size_t from) {
  for (std::size_t i = from; i < s.size(); ++i)
    if (!s[i]) return false;
  return true;
}

std::optional<ExtendedValue> constant_tail(const std::vector<Summary>& s, std::size_t window) {
  if (s.size() < window || !all_resolved(s, s.size() - window)) return std::nullopt;
  const ExtendedValue& last = *s.back();
  for (std::size_t i = s.size() - window; i < s.size(); ++i)
    if (!(*s[i] == last)) return std::nullopt;
  return last;
}

/// Longest period recognised. Finite-state verdicts on a short loop can
/// cycle with the lcm of their cycle lengths, e.g. 6 for a 2- and a 3-cycle.
constexpr std::size_t kMaxPeriod = 16;

/// Period p >= 2 repeated `window` times at the end of the sequence.
std::optional<std::vector<ExtendedValue>> periodic_tail(const std::vector<Summary>& s, std::size_t window) {
  for (std::size_t p = 2; p <= kMaxPeriod; ++p) {
    const std::size_t need = p * window;
    if (s.size() < need || !all_resolved(s, s.size() - need)) continue;
    bool ok = true;
    for (std::size_t i = s.size() - need; i + p < s.size() && ok; ++i) ok = (*s[i] == *s[i + p]);
    if (ok) {
      std::vector<ExtendedValue> period;
      for (std::size_t i = s.size() - p; i < s.size(); ++i) period.push_back(*s[i]);
      return period;
    }
  }
  return std::nullopt;
}

std::optional<std::vector<Rational>> finite_tail(const std::vector<Summary>& s, std::size_t count) {
  if (s.size() < count) return std::nullopt;
  std::vector<Rational> out;
  for (std::size_t i = s.size() - count; i < s.size(); ++i) {
    if (!s[i] || !s[i]->is_finite_number()) return std::nullopt;
    out.push_back(s[i]->as_rational());
  }
  return out;
}

/// +1 when the tail grows without bound, -1 when it falls without bound.
int divergence(const std::vector<Summary>& s, std::size_t window) {
  auto tail = finite_tail(s, window + 1);
  if (!tail) return 0;
  const auto& t = *tail;
  const Rational diff = t[1] - t[0];
  bool arithmetic = diff != 0;
  for (std::size_t i = 1; i + 1 < t.size() && arithmetic; ++i) arithmetic = (t[i + 1] - t[i] == diff);
  if (arithmetic) return diff > 0 ? 1 : -1;
  // Constant ratio of magnitude above one (exponential growth).
  if (t[0] == 0) return 0;
  const Rational ratio = t[1] / t[0];
  if (ratio <= 1) return 0;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    if (t[i] == 0 || t[i + 1] / t[i] != ratio) return 0;
  }
  return t[0] > 0 ? 1 : -1;
}

/// Fits m_k = (A k + B) / (C k + D) exactly through the last 3 + window
/// summaries and returns A / C when the fit is unique and C != 0.
std::optional<Rational> rational_fit(const std::vector<Summary>& s, std::size_t window) {
  const std::size_t count = 3 + window;
  auto tail = finite_tail(s, count);
  if (!tail) return std::nullopt;
  const std::size_t first_k = s.size() - count + 1;  // iterations are 1-based
  std::vector<std::array<Rational, 4>> rows;
  for (std::size_t i = 0; i < count; ++i) {
    const Rational k = static_cast<long long>(first_k + i);
    const Rational& m = (*tail)[i];
    rows.push_back({k, Rational(1), -k * m, -m});
  }
  // Reduced row echelon form.
  std::array<int, 4> pivot_row{-1, -1, -1, -1};
  std::size_t r = 0;
  for (std::size_t c = 0; c < 4 && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    const Rational lead = rows[r][c];
    for (auto& x : rows[r]) x /= lead;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const Rational f = rows[i][c];
      for (std::size_t j = 0; j < 4; ++j) rows[i][j] -= f * rows[r][j];
    }
    pivot_row[c] = static_cast<int>(r);
    ++r;
  }
  if (r != 3) return std::nullopt;  // need a one-dimensional nullspace
  std::size_t free_col = 0;
  while (pivot_row[free_col] != -1) ++free_col;
  std::array<Rational, 4> x{};
  x[free_col] = 1;
  for (std::size_t c = 0; c < 4; ++c) {
    if (pivot_row[c] >= 0) x[c] = -rows[static_cast<std::size_t>(pivot_row[c])][free_col];
  }
  const Rational &A = x[0], &C = x[2], &D = x[3];
  if (C == 0) return std::nullopt;
  for (std::size_t i = 0; i < count; ++i) {
    if (C * static_cast<long long>(first_k + i) + D == 0) return std::nullopt;
  }
  return A / C;
}

bool within_tolerance(const std::vector<Summary>& s, std::size_t window, const Rational& eps) {
  if (eps <= 0) return false;
  auto tail = finite_tail(s, window + 1);
  if (!tail) return false;
  for (std::size_t i = 0; i + 1 < tail->size(); ++i) {
    Rational d = (*tail)[i + 1] - (*tail)[i];
    if (d < 0) d = -d;
    if (d > eps) return false;
  }
  return true;
}

ExtendedValue numeric_value(const Rational& r) {
  if (boost::multiprecision::denominator(r) == 1) return ExtendedValue::integer(boost::multiprecision::numerator(r));
  return ExtendedValue::rational(r);
}

LimitResult detect_scalar(const ValueDomain& d, const std::vector<Summary>& s, bool upper, const LimitBudget& b) {
  const std::size_t w = b.confirmWindow;
  if (auto c = constant_tail(s, w)) return {*c, LimitKind::Exact, s.size()};
  if (auto period = periodic_tail(s, w)) {
    try {
      ExtendedValue v = upper ? sup(d, *period) : inf(d, *period);
      return {v, LimitKind::Exact, s.size()};
    } catch (const NoBoundError&) {
      return undetermined();
    }
  }
  if (!d.is_numeric_order()) return undetermined();
  if (int dir = divergence(s, w); dir != 0) {
    ExtendedValue v = dir > 0 ? ExtendedValue::pos_inf() : ExtendedValue::neg_inf();
    if (!d.contains(v)) return undetermined();
    auto top = d.top();
    LimitKind kind = (top && *top == v) ? LimitKind::DivergedToTop : LimitKind::DivergedToBottom;
    return {v, kind, s.size()};
  }
  if (auto lim = rational_fit(s, w)) return {numeric_value(*lim), LimitKind::Converged, s.size()};
  if (within_tolerance(s, w, b.epsilon)) return {*s.back(), LimitKind::NumericTolerance, s.size()};
  return undetermined();
}

int severity(LimitKind k) {
  switch (k) {
    case LimitKind::Exact:
      return 0;
    case LimitKind::DivergedToTop:
    case LimitKind::DivergedToBottom:
      return 1;
    case LimitKind::Converged:
      return 2;
    case LimitKind::NumericTolerance:
      return 3;
    case LimitKind::Undetermined:
      return 4;
  }
  return 4;
}

}  // namespace

LimitResult detect_limit(const ValueDomain& d, const std::vector<std::optional<ExtendedValue>>& summaries,
                         bool upper, const LimitBudget& budget) {
  if (d.kind() != DomainKind::Product) return detect_scalar(d, summaries, upper, budget);
  ExtendedValue::Tuple components;
  LimitKind worst = LimitKind::Exact;
  for (std::size_t i = 0; i < d.arity(); ++i) {
    std::vector<Summary> column;
    column.reserve(summaries.size());
    for (const auto& s : summaries) column.push_back(s ? Summary(s->as_tuple()[i]) : Summary());
    LimitResult r = detect_limit(d.inner(), column, upper, budget);
    if (!r.resolved()) return undetermined();
    components.push_back(*r.value);
    if (severity(r.kind) > severity(worst)) worst = r.kind;
  }
  if (worst == LimitKind::DivergedToTop || worst == LimitKind::DivergedToBottom) {
    // A tuple with a diverging component is still a point of the product.
    auto top = d.top();
    ExtendedValue v = ExtendedValue::tuple(components);
    worst = (top && *top == v) ? LimitKind::DivergedToTop : LimitKind::Converged;
    return {v, worst, summaries.size()};
  }
  return {ExtendedValue::tuple(std::move(components)), worst, summaries.size()};
}

namespace {

LimitResult eval_impl(const VerdictFunction& v, const LassoTrace& t, bool upper, const LimitBudget& budget) {
  if (budget.confirmWindow < 2 || budget.maxLoopIterations < budget.confirmWindow) {
    throw Error("limit budget needs maxLoopIterations >= confirmWindow >= 2");
  }
  const ValueDomain& d = v.codomain();
  auto run = v.start();
  for (Symbol s : t.stem()) run->step(s);
  std::vector<Summary> summaries;
  std::vector<ExtendedValue> values;
  values.reserve(t.loop().size());
  std::optional<LimitResult> candidate;
  std::size_t confirmAt = 0;
  for (std::size_t k = 1; k <= budget.maxLoopIterations; ++k) {
    values.clear();
    for (Symbol s : t.loop()) {
      run->step(s);
      values.push_back(run->value());
    }
    try {
      summaries.emplace_back(upper ? sup(d, values) : inf(d, values));
    } catch (const NoBoundError&) {
      summaries.emplace_back(std::nullopt);
    }
    LimitResult r = detect_limit(d, summaries, upper, budget);
    if (!r.resolved()) {
      candidate.reset();
      continue;
    }
    if (!candidate || candidate->kind != r.kind || !(*candidate->value == *r.value)) {
      // A shape first seen at iteration k must survive until iteration 2k.
      candidate = r;
      confirmAt = std::min(2 * k, budget.maxLoopIterations);
    }
    if (k >= confirmAt) {
      r.iterationsUsed = k;
      return r;
    }
  }
  LimitResult r = undetermined();
  r.iterationsUsed = budget.maxLoopIterations;
  return r;
}

}  // namespace

LimitResult eval_limsup(const VerdictFunction& v, const LassoTrace& t, const LimitBudget& budget) {
  return eval_impl(v, t, true, budget);
}

LimitResult eval_liminf(const VerdictFunction& v, const LassoTrace& t, const LimitBudget& budget) {
  return eval_impl(v, t, false, budget);
}

LimitResult eval_limit(const VerdictFunction& v, const LassoTrace& t, Side side, const LimitBudget& budget) {
  return side == Side::Below ? eval_limsup(v, t, budget) : eval_liminf(v, t, budget);
}

}  // namespace qmon
