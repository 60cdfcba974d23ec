#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vbs/algebra.hpp"
#include "vbs/config.hpp"
#include "vbs/hypergraph.hpp"
#include "vbs/setchain.hpp"
#include "vbs/types.hpp"

namespace vbs {

// Propositional queries over variable-value literals:
//   or    := and ( '|' and )*
//   and   := unary ( '&' unary )*
//   unary := '!' unary | '(' or ')' | name '=' value
class QueryExpr {
public:
  enum class Kind { Literal, Not, And, Or };

  static QueryExpr parse(const Model& model, std::string_view text);

  static QueryExpr literal(VarId var, int value);
  static QueryExpr negate(QueryExpr inner);
  static QueryExpr conjunction(std::vector<QueryExpr> terms);
  static QueryExpr disjunction(std::vector<QueryExpr> terms);

  Kind kind() const { return kind_; }
  const std::vector<QueryExpr>& children() const { return children_; }
  VarId literal_var() const { return var_; }
  int literal_value() const { return value_; }

  const VarSet& vars() const { return vars_; }
  bool evaluate(const Configuration& c) const;
  std::string to_string(const Model& model) const;

private:
  QueryExpr() = default;

  Kind kind_ = Kind::Literal;
  std::vector<QueryExpr> children_;
  VarId var_ = -1;
  int value_ = -1;
  VarSet vars_;
};

// The node set a query needs, found by rerunning the reduction with the
// query variables pinned, closed up to a connected subtree. Projected scopes
// keep only variables shared with the rest of the plan or asked for by the
// query.
struct QueryPlan {
  std::vector<int> nodes;         // ascending tree node ids
  std::vector<VarSet> projected;  // parallel to nodes
  std::vector<int> parent;        // parallel to nodes, node id or -1 at root
  int root = -1;                  // node id
  std::vector<int> order;         // BFS order over plan nodes, root first
  VarSet union_scope;             // union of the full node scopes
  VarSet projected_scope;         // union of the projected scopes
  /// Survivors of the pinned reduction before closing: (node id, content).
  std::vector<std::pair<int, VarSet>> residual;

  std::size_t position_of(int node) const;
  const VarSet& projected_at(int node) const {
    return projected[position_of(node)];
  }
};

QueryPlan plan_vars(const MarkovTree& tree, const VarSet& vars);
QueryPlan plan_query(const MarkovTree& tree, const QueryExpr& query);

/// Rebuilds the joint over the plan's projected scope union from per-node
/// marginals (indexed by tree node). Multi-node plans divide out separator
/// marginals, so they need a removable instance.
template <Valuation V>
V union_marginal(const QueryPlan& plan, const MarkovTree& tree,
                 std::span<const V> node_marginals) {
  if (node_marginals.size() != tree.size())
    throw ModelError("need one marginal per tree node");
  V acc = marginalize(node_marginals[static_cast<std::size_t>(plan.root)],
                      plan.projected_at(plan.root));
  if (plan.nodes.size() == 1) return acc;
  if constexpr (Removable<V>) {
    for (std::size_t i = 1; i < plan.order.size(); ++i) {
      const int u = plan.order[i];
      const int p = plan.parent[plan.position_of(u)];
      const V& r = node_marginals[static_cast<std::size_t>(u)];
      const V numerator = marginalize(r, plan.projected_at(u));
      const V denominator = marginalize(r, tree.separator_between(u, p));
      acc = combine(acc, remove(numerator, denominator));
    }
    return acc;
  } else {
    throw CapabilityError(
        "multi-node query plans need an instance with removal");
  }
}

/// Sums the union marginal over the configurations of the query variables
/// that satisfy the query.
template <ConfigurationTabled V>
double evaluate_query(const QueryPlan& plan, const MarkovTree& tree,
                      std::span<const V> node_marginals, const QueryExpr& query) {
  const V um = union_marginal(plan, tree, node_marginals);
  const V rho = marginalize(um, query.vars());
  const ConfigIndexer idx(*tree.model(), query.vars());
  double sum = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (query.evaluate(idx.configuration(i))) sum += rho.value_at(i);
  }
  return sum;
}

/// Chain factors rearranged as per-node marginals.
template <Removable V>
std::vector<V> marginals_by_node(const SetChain<V>& chain,
                                 const MarkovTree& tree) {
  if (chain.factors.size() != tree.size())
    throw ModelError("chain does not cover the tree");
  std::vector<V> out;
  out.reserve(tree.size());
  for (std::size_t i = 0; i < tree.size(); ++i)
    out.push_back(V::identity(tree.model(), VarSet{}));
  for (const SetChainFactor<V>& f : chain.factors)
    out[static_cast<std::size_t>(f.node)] = f.marginal;
  return out;
}

}  // namespace vbs
