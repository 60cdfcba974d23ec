#pragma once

// Brute-force reference computations for the tests. Everything here decodes
// configurations with its own mixed-radix arithmetic (last scope variable
// fastest) instead of calling the library's indexing helpers, so agreement
// between the two is meaningful.

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "vbs/types.hpp"

namespace oracle {

using vbs::Model;
using vbs::VarId;
using vbs::VarSet;

struct Table {
  VarSet scope;
  std::vector<double> values;
};

inline std::size_t space(const Model& m, const VarSet& s) {
  std::size_t n = 1;
  for (VarId v : s) n *= m.var(v).frame.size();
  return n;
}

/// The value index of variable v inside configuration `idx` of scope s.
inline int digit_of(const Model& m, const VarSet& s, std::size_t idx, VarId v) {
  std::size_t stride = 1;
  bool seen = false;
  std::size_t radix = 1;
  for (std::size_t i = s.size(); i-- > 0;) {
    const std::size_t fs = m.var(s[i]).frame.size();
    if (s[i] == v) {
      seen = true;
      radix = fs;
      break;
    }
    stride *= fs;
  }
  if (!seen) throw std::logic_error("digit_of: variable not in scope");
  return static_cast<int>(idx / stride % radix);
}

/// The configuration index in `sub` induced by configuration `idx` of s.
inline std::size_t project_index(const Model& m, const VarSet& s,
                                 std::size_t idx, const VarSet& sub) {
  std::size_t out = 0;
  for (VarId v : sub)
    out = out * m.var(v).frame.size() +
          static_cast<std::size_t>(digit_of(m, s, idx, v));
  return out;
}

/// Pointwise product of all factors over the union of their scopes.
inline Table product(const Model& m, const std::vector<Table>& factors) {
  VarSet u;
  for (const Table& f : factors) u = u | f.scope;
  Table out{u, std::vector<double>(space(m, u), 1.0)};
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    for (const Table& f : factors)
      out.values[i] *= f.values[project_index(m, u, i, f.scope)];
  }
  return out;
}

/// Sums the table down to `onto` (which must be a subset of its scope).
inline Table marginal(const Model& m, const Table& t, const VarSet& onto) {
  Table out{onto, std::vector<double>(space(m, onto), 0.0)};
  for (std::size_t i = 0; i < t.values.size(); ++i)
    out.values[project_index(m, t.scope, i, onto)] += t.values[i];
  return out;
}

/// Sum of joint entries whose configuration satisfies `sat`. The predicate
/// receives a lookup from variable to value index over the joint scope.
inline double satisfying_sum(
    const Model& m, const Table& joint,
    const std::function<bool(const std::function<int(VarId)>&)>& sat) {
  double total = 0.0;
  for (std::size_t i = 0; i < joint.values.size(); ++i) {
    auto lookup = [&](VarId v) { return digit_of(m, joint.scope, i, v); };
    if (sat(lookup)) total += joint.values[i];
  }
  return total;
}

// ---------------------------------------------------------------------------
// Belief-mass reference: masses keyed by bitmask over the configuration space
// of the scope (bit c = configuration index c, same ordering as above).

struct MassTable {
  VarSet scope;
  std::map<std::uint32_t, double> mass;  // non-empty masks only
};

/// Extends a configuration-set mask from scope `s` into scope `u` ⊇ s.
inline std::uint32_t extend_mask(const Model& m, const VarSet& s,
                                 std::uint32_t mask, const VarSet& u) {
  std::uint32_t out = 0;
  const std::size_t n = space(m, u);
  for (std::size_t d = 0; d < n; ++d) {
    if (mask & (std::uint32_t{1} << project_index(m, u, d, s)))
      out |= std::uint32_t{1} << d;
  }
  return out;
}

/// Projects a configuration-set mask from scope s onto `onto` ⊆ s.
inline std::uint32_t project_mask(const Model& m, const VarSet& s,
                                  std::uint32_t mask, const VarSet& onto) {
  std::uint32_t out = 0;
  const std::size_t n = space(m, s);
  for (std::size_t d = 0; d < n; ++d) {
    if (mask & (std::uint32_t{1} << d))
      out |= std::uint32_t{1} << project_index(m, s, d, onto);
  }
  return out;
}

/// Unnormalized Dempster combination: extend focal sets to the union scope,
/// intersect pairwise, multiply masses. Mass meeting the empty set is dropped.
inline MassTable dempster(const Model& m, const MassTable& a,
                          const MassTable& b) {
  MassTable out{a.scope | b.scope, {}};
  for (const auto& [ma, wa] : a.mass) {
    const std::uint32_t ea = extend_mask(m, a.scope, ma, out.scope);
    for (const auto& [mb, wb] : b.mass) {
      const std::uint32_t eb = extend_mask(m, b.scope, mb, out.scope);
      const std::uint32_t c = ea & eb;
      if (c != 0) out.mass[c] += wa * wb;
    }
  }
  return out;
}

/// Mass projection onto a subscope.
inline MassTable project(const Model& m, const MassTable& a,
                         const VarSet& onto) {
  MassTable out{onto, {}};
  for (const auto& [mask, w] : a.mass)
    out.mass[project_mask(m, a.scope, mask, onto)] += w;
  return out;
}

/// The commonality numbers Q(A) = sum of masses of supersets of A, listed for
/// every non-empty A ascending by mask.
inline std::vector<double> commonality_of(const Model& m, const MassTable& a) {
  const std::size_t n = space(m, a.scope);
  std::vector<double> q((std::size_t{1} << n) - 1, 0.0);
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    for (const auto& [focal, w] : a.mass) {
      if ((focal & mask) == mask) q[mask - 1] += w;
    }
  }
  return q;
}

}  // namespace oracle
