#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vbs/algebra.hpp"
#include "vbs/types.hpp"

namespace vbs {

// Property-based conformance checking of the valuation axioms. Every axiom
// is exercised on freshly sampled operands; a failing case is reported with
// a rendered counterexample so the offending operands can be inspected.

struct AxiomOutcome {
  std::string axiom;
  int cases = 0;
  int failures = 0;
  std::string first_counterexample;

  bool passed() const { return failures == 0; }
};

struct ConformanceReport {
  std::vector<AxiomOutcome> outcomes;

  bool all_passed() const {
    for (const AxiomOutcome& o : outcomes) {
      if (!o.passed()) return false;
    }
    return true;
  }

  const AxiomOutcome* find(std::string_view axiom) const {
    for (const AxiomOutcome& o : outcomes) {
      if (o.axiom == axiom) return &o;
    }
    return nullptr;
  }

  std::string summary() const {
    std::string out;
    for (const AxiomOutcome& o : outcomes) {
      out += o.axiom + ": " + std::to_string(o.cases - o.failures) + "/" +
             std::to_string(o.cases) + (o.passed() ? " ok" : " FAILED");
      if (!o.passed()) out += "\n  counterexample: " + o.first_counterexample;
      out += "\n";
    }
    return out;
  }
};

struct SuiteOptions {
  int cases_per_axiom = 200;
  double tolerance = 1e-9;
  std::vector<std::string> axioms;  // empty selects every applicable axiom
};

namespace detail {

template <Valuation V>
std::string describe(const V& v) {
  std::string out = v.model()->render(v.scope()) + " [";
  const std::size_t shown = std::min<std::size_t>(v.entry_count(), 8);
  char buf[32];
  for (std::size_t i = 0; i < shown; ++i) {
    if (i) out += " ";
    std::snprintf(buf, sizeof buf, "%.6g", v.entry(i));
    out += buf;
  }
  if (shown < v.entry_count()) out += " ...";
  out += "]";
  return out;
}

template <Valuation V>
std::string describe2(const char* an, const V& a, const char* bn, const V& b) {
  return std::string(an) + "=" + describe(a) + " " + bn + "=" + describe(b);
}

}  // namespace detail

template <class V, class Sampler>
  requires Valuation<V>
ConformanceReport run_axiom_suite(Sampler& sampler, const SuiteOptions& opt = {}) {
  using detail::describe;
  using detail::describe2;
  ConformanceReport report;
  const double tol = opt.tolerance;

  auto wanted = [&](std::string_view name) {
    if (opt.axioms.empty()) return true;
    for (const std::string& a : opt.axioms) {
      if (a == name) return true;
    }
    return false;
  };

  auto run = [&](const char* name, auto&& body) {
    if (!wanted(name)) return;
    AxiomOutcome out;
    out.axiom = name;
    for (int i = 0; i < opt.cases_per_axiom; ++i) {
      std::optional<std::string> failure = body();
      ++out.cases;
      if (failure) {
        ++out.failures;
        if (out.first_counterexample.empty()) out.first_counterexample = *failure;
      }
    }
    report.outcomes.push_back(std::move(out));
  };

  run("C1", [&]() -> std::optional<std::string> {
    const V a = sampler.arbitrary(sampler.random_scope());
    const V b = sampler.arbitrary(sampler.random_scope());
    const V c = combine(a, b);
    if (c.scope() == (a.scope() | b.scope()) && c.model() == a.model())
      return std::nullopt;
    return "combination scope is not the union: " + describe2("a", a, "b", b);
  });

  run("C2", [&]() -> std::optional<std::string> {
    const V a = sampler.arbitrary(sampler.random_scope());
    const V b = sampler.arbitrary(sampler.random_scope());
    const V c = sampler.arbitrary(sampler.random_scope());
    const V lhs = combine(combine(a, b), c);
    const V rhs = combine(a, combine(b, c));
    if (approx_equal(lhs, rhs, tol)) return std::nullopt;
    return "associativity broke: " + describe2("a", a, "b", b) + " c=" + describe(c);
  });

  run("C3", [&]() -> std::optional<std::string> {
    const V a = sampler.arbitrary(sampler.random_scope());
    const V b = sampler.arbitrary(sampler.random_scope());
    if (approx_equal(combine(a, b), combine(b, a), tol)) return std::nullopt;
    return "commutativity broke: " + describe2("a", a, "b", b);
  });

  run("C4", [&]() -> std::optional<std::string> {
    const V a = sampler.arbitrary(sampler.random_scope());
    const VarSet s = sampler.random_scope();
    const V z = V::zero(sampler.model(), s);
    const V c = combine(a, z);
    if (c.is_zero() && c.scope() == (a.scope() | s)) return std::nullopt;
    return "zero did not absorb: a=" + describe(a) + " zero scope " +
           sampler.model()->render(s);
  });

  run("C5", [&]() -> std::optional<std::string> {
    const VarSet s = sampler.random_scope();
    const V a = sampler.normal_or_zero(s);
    if (approx_equal(combine(a, V::identity(sampler.model(), s)), a, tol))
      return std::nullopt;
    return "identity was not neutral: a=" + describe(a);
  });

  run("C6", [&]() -> std::optional<std::string> {
    const V a = sampler.normal(sampler.random_scope());
    const V collapsed = marginalize(a, VarSet{});
    const V unit = V::identity(sampler.model(), VarSet{});
    if (approx_equal(collapsed, unit, tol) && collapsed.is_normal())
      return std::nullopt;
    return "normal element did not collapse to the unit: a=" + describe(a);
  });

  run("M1", [&]() -> std::optional<std::string> {
    const VarSet s = sampler.random_scope();
    const V a = sampler.arbitrary(s);
    const VarSet r1 = sampler.random_subscope(s);
    const VarSet r2 = sampler.random_subscope(r1);
    const V stepped = marginalize(marginalize(a, r1), r2);
    const V direct = marginalize(a, r2);
    if (approx_equal(stepped, direct, tol)) return std::nullopt;
    return "staged marginalization diverged: a=" + describe(a) + " via " +
           sampler.model()->render(r1) + " to " + sampler.model()->render(r2);
  });

  run("M2", [&]() -> std::optional<std::string> {
    const VarSet s = sampler.random_scope();
    const VarSet r = sampler.random_subscope(s);
    if (marginalize(V::zero(sampler.model(), s), r).is_zero())
      return std::nullopt;
    return "zero lost on marginalization from " + sampler.model()->render(s);
  });

  run("M3", [&]() -> std::optional<std::string> {
    const VarSet s = sampler.random_scope();
    const VarSet r = sampler.random_subscope(s);
    const V a = sampler.normal(s);
    if (!marginalize(a, r).is_normal(1e-7))
      return "normality lost: a=" + describe(a);
    const V b = sampler.non_normal(s);
    if (marginalize(b, r).is_normal(1e-7))
      return "normality gained: b=" + describe(b);
    return std::nullopt;
  });

  if constexpr (PositivityGraded<V>) {
    run("M4", [&]() -> std::optional<std::string> {
      const VarSet s = sampler.random_scope();
      const VarSet r = sampler.random_subscope(s);
      const V a = sampler.positive_normal(s);
      if (marginalize(a, r).is_positive_normal(1e-7)) return std::nullopt;
      return "positive normality lost: a=" + describe(a);
    });
  }

  run("CM1", [&]() -> std::optional<std::string> {
    VarSet s, r;
    for (int attempt = 0; attempt < 64; ++attempt) {
      s = sampler.random_scope();
      r = sampler.random_scope();
      if (!(s - r).empty()) break;
    }
    if ((s - r).empty()) return std::nullopt;
    const VarSet outside = s - r;
    const VarId x = outside[0];
    const V a = sampler.arbitrary(s);
    const V b = sampler.arbitrary(r);
    const V lhs = marginalize(combine(a, b), (s | r).without(x));
    const V rhs = combine(marginalize(a, s.without(x)), b);
    if (approx_equal(lhs, rhs, tol)) return std::nullopt;
    return "local deletion diverged: " + describe2("a", a, "b", b);
  });

  run("CM2", [&]() -> std::optional<std::string> {
    const VarSet s = sampler.random_scope();
    const VarSet r = sampler.random_subscope(s);
    const V a = sampler.normal(s);
    if (approx_equal(combine(a, V::identity(sampler.model(), r)), a, tol))
      return std::nullopt;
    return "subscope identity disturbed a normal element: a=" + describe(a);
  });

  if constexpr (Removable<V>) {
    run("R1", [&]() -> std::optional<std::string> {
      const V a = sampler.arbitrary(sampler.random_scope());
      const V b = sampler.normal_or_zero(sampler.random_scope());
      const V c = remove(a, b);
      if (c.scope() != (a.scope() | b.scope()) || c.model() != a.model())
        return "removal scope is not the union: " + describe2("a", a, "b", b);
      for (std::size_t i = 0; i < c.entry_count(); ++i) {
        const double v = c.entry(i);
        if (!(v >= 0.0) || !std::isfinite(v))
          return "removal produced a bad entry: " + describe2("a", a, "b", b);
      }
      return std::nullopt;
    });

    run("R2", [&]() -> std::optional<std::string> {
      const V a = sampler.arbitrary(sampler.random_scope());
      if (approx_equal(combine(remove(a, a), a), a, tol)) return std::nullopt;
      return "self-removal is not a local unit: a=" + describe(a);
    });

    run("CR", [&]() -> std::optional<std::string> {
      const V a = sampler.arbitrary(sampler.random_scope());
      const V b = sampler.arbitrary(sampler.random_scope());
      const V c = sampler.normal_or_zero(sampler.random_scope());
      const V lhs = remove(combine(a, b), c);
      const V rhs = combine(a, remove(b, c));
      if (approx_equal(lhs, rhs, tol)) return std::nullopt;
      return "removal did not distribute: " + describe2("a", a, "b", b) +
             " c=" + describe(c);
    });
  }

  return report;
}

}  // namespace vbs
