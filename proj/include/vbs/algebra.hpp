#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <memory>

#include "vbs/types.hpp"

namespace vbs {

// ---------------------------------------------------------------------------
// Operation counters, kept per thread so concurrent pipelines do not mix.
// ---------------------------------------------------------------------------

struct OpCounts {
  std::size_t combinations = 0;
  std::size_t marginalizations = 0;
  std::size_t removals = 0;
  std::size_t max_combine_scope = 0;  // largest union scope seen by a product

  void reset() { *this = OpCounts{}; }
};

OpCounts& op_counts();

namespace detail {

inline void count_combination(std::size_t union_scope_size) {
  OpCounts& c = op_counts();
  ++c.combinations;
  if (union_scope_size > c.max_combine_scope)
    c.max_combine_scope = union_scope_size;
}

inline void count_marginalization() { ++op_counts().marginalizations; }

inline void count_removal(std::size_t union_scope_size) {
  OpCounts& c = op_counts();
  ++c.removals;
  if (union_scope_size > c.max_combine_scope)
    c.max_combine_scope = union_scope_size;
}

/// Reciprocal with the convention 1/0 = 0.
inline double pseudo_inverse(double x) { return x == 0.0 ? 0.0 : 1.0 / x; }

inline void require_same_model(const ModelPtr& a, const ModelPtr& b) {
  if (a.get() != b.get())
    throw ModelError("operands belong to different models");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Concepts shared by the generic engine code.
// ---------------------------------------------------------------------------

template <class V>
concept Valuation = std::copyable<V> &&
    requires(const V& a, const V& b, const VarSet& s, const ModelPtr& m) {
      { a.scope() } -> std::convertible_to<const VarSet&>;
      { a.model() } -> std::convertible_to<ModelPtr>;
      { combine(a, b) } -> std::same_as<V>;
      { marginalize(a, s) } -> std::same_as<V>;
      { V::identity(m, s) } -> std::same_as<V>;
      { V::zero(m, s) } -> std::same_as<V>;
      { a.is_zero() } -> std::convertible_to<bool>;
      { a.is_normal() } -> std::convertible_to<bool>;
      { a.entry_count() } -> std::convertible_to<std::size_t>;
      { a.entry(std::size_t{}) } -> std::convertible_to<double>;
    };

template <class V>
concept Removable = Valuation<V> && requires(const V& a, const V& b) {
  { remove(a, b) } -> std::same_as<V>;
  { inverse(a) } -> std::same_as<V>;
};

/// Valuations whose entries are addressed by configurations of the scope.
template <class V>
concept ConfigurationTabled = Valuation<V> && requires(const V& a) {
  { a.value_at(std::size_t{}) } -> std::convertible_to<double>;
  requires V::entries_are_configurations;
};

template <class V>
concept PositivityGraded = Valuation<V> && requires(const V& a) {
  { a.is_positive_normal() } -> std::convertible_to<bool>;
};

// ---------------------------------------------------------------------------
// Generic helpers.
// ---------------------------------------------------------------------------

/// Reshape v onto exactly `target`: marginalize away variables outside it,
/// then extend vacuously (combine with the identity) onto the rest.
template <Valuation V>
V adjust_to_scope(const V& v, const VarSet& target) {
  const VarSet kept = v.scope() & target;
  V shrunk = (kept == v.scope()) ? v : marginalize(v, kept);
  if (shrunk.scope() == target) return shrunk;
  return combine(shrunk, V::identity(v.model(), target));
}

/// Largest entry difference after aligning both operands on the scope union.
template <Valuation V>
double max_abs_diff(const V& a, const V& b) {
  detail::require_same_model(a.model(), b.model());
  const VarSet u = a.scope() | b.scope();
  const V ea = adjust_to_scope(a, u);
  const V eb = adjust_to_scope(b, u);
  double worst = 0.0;
  for (std::size_t i = 0; i < ea.entry_count(); ++i) {
    const double d = std::fabs(ea.entry(i) - eb.entry(i));
    if (d > worst) worst = d;
  }
  return worst;
}

template <Valuation V>
bool approx_equal(const V& a, const V& b, double tolerance = 1e-9) {
  return max_abs_diff(a, b) <= tolerance;
}

}  // namespace vbs
