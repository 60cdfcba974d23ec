#pragma once

#include <optional>
#include <span>
#include <vector>

#include "vbs/algebra.hpp"
#include "vbs/hypergraph.hpp"
#include "vbs/types.hpp"

namespace vbs {

// Factors attached to the nodes of a Markov tree. Nodes without a factor
// hold the empty-scope identity; several factors landing on one node are
// combined up front.
template <Valuation V>
class TreeAssignment {
public:
  TreeAssignment(MarkovTree tree, std::vector<V> node_valuations)
      : tree_(std::move(tree)), values_(std::move(node_valuations)) {
    if (values_.size() != tree_.size())
      throw ModelError("assignment needs one valuation per tree node");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!values_[i].scope().subset_of(tree_.node(static_cast<int>(i))))
        throw ModelError("valuation scope exceeds its tree node");
      detail::require_same_model(values_[i].model(), tree_.model());
    }
  }

  /// Routes each factor to the lowest-indexed node covering its scope.
  static TreeAssignment route_factors(MarkovTree tree, std::span<const V> factors) {
    std::vector<V> values;
    values.reserve(tree.size());
    for (std::size_t i = 0; i < tree.size(); ++i)
      values.push_back(V::identity(tree.model(), VarSet{}));
    std::vector<bool> occupied(tree.size(), false);
    for (const V& f : factors) {
      bool placed = false;
      for (std::size_t i = 0; i < tree.size() && !placed; ++i) {
        if (f.scope().subset_of(tree.node(static_cast<int>(i)))) {
          values[i] = occupied[i] ? combine(values[i], f) : f;
          occupied[i] = true;
          placed = true;
        }
      }
      if (!placed)
        throw ModelError("no tree node covers factor scope " +
                         tree.model()->render(f.scope()));
    }
    return TreeAssignment(std::move(tree), std::move(values));
  }

  const MarkovTree& tree() const { return tree_; }
  const V& value(int node) const { return values_[static_cast<std::size_t>(node)]; }
  const std::vector<V>& values() const { return values_; }

  /// The combination of every node valuation, extended onto the full union
  /// scope. Intended for small models and oracle checks.
  V joint() const {
    VarSet u;
    for (std::size_t i = 0; i < tree_.size(); ++i)
      u = u | tree_.node(static_cast<int>(i));
    V acc = V::identity(tree_.model(), u);
    for (const V& v : values_) acc = combine(acc, v);
    return acc;
  }

private:
  MarkovTree tree_;
  std::vector<V> values_;
};

template <Valuation V>
class MessageStore {
public:
  explicit MessageStore(const MarkovTree& tree)
      : slots_(2 * tree.link_count()) {}

  bool has(const MarkovTree& tree, int from, int to) const {
    return slots_[slot(tree, from, to)].has_value();
  }
  const V& get(const MarkovTree& tree, int from, int to) const {
    const auto& s = slots_[slot(tree, from, to)];
    if (!s)
      throw SchedulingError("message " + std::to_string(from) + "->" +
                            std::to_string(to) + " has not been computed");
    return *s;
  }
  void put(const MarkovTree& tree, int from, int to, V value) {
    slots_[slot(tree, from, to)] = std::move(value);
  }
  std::size_t count() const {
    std::size_t n = 0;
    for (const auto& s : slots_) {
      if (s) ++n;
    }
    return n;
  }

private:
  std::size_t slot(const MarkovTree& tree, int from, int to) const {
    const auto e = tree.edge_between(from, to);
    if (!e) throw SchedulingError("nodes are not adjacent in the tree");
    return 2 * *e + (tree.link(*e).first == from ? 0 : 1);
  }

  std::vector<std::optional<V>> slots_;
};

/// The message from `from` to `to`: the node valuation combined with every
/// incoming message except the one from `to`, reshaped onto the separator.
/// All prerequisite messages must already be in the store.
template <Valuation V>
V compute_message(const TreeAssignment<V>& assignment, int from, int to,
                  const MessageStore<V>& store) {
  const MarkovTree& tree = assignment.tree();
  V acc = assignment.value(from);
  for (int w : tree.neighbors(from)) {
    if (w == to) continue;
    acc = combine(acc, store.get(tree, w, from));
  }
  return adjust_to_scope(acc, tree.separator_between(from, to));
}

/// The node marginal: node valuation times all incoming messages, on the
/// node's full variable set.
template <Valuation V>
V marginal_at(const TreeAssignment<V>& assignment, int node,
              const MessageStore<V>& store) {
  const MarkovTree& tree = assignment.tree();
  V acc = assignment.value(node);
  for (int w : tree.neighbors(node)) acc = combine(acc, store.get(tree, w, node));
  return adjust_to_scope(acc, tree.node(node));
}

template <Valuation V>
struct PropagationResult {
  MessageStore<V> messages;
  std::vector<V> marginals;  // indexed by tree node
};

/// Two sweeps anchored at `root` (default: the head of the construction
/// order): an inward pass toward the root, then an outward pass, followed by
/// marginal computation at every node.
template <Valuation V>
PropagationResult<V> propagate_all(const TreeAssignment<V>& assignment,
                                   std::optional<int> root_choice = {}) {
  const MarkovTree& tree = assignment.tree();
  const int root = root_choice.value_or(tree.construction_order().front());
  if (root < 0 || static_cast<std::size_t>(root) >= tree.size())
    throw ModelError("root node out of range");

  const MarkovTree::Traversal t = tree.bfs_from(root);
  MessageStore<V> store(tree);
  for (std::size_t i = t.order.size(); i-- > 0;) {
    const int u = t.order[i];
    const int p = t.parent[static_cast<std::size_t>(u)];
    if (p >= 0) store.put(tree, u, p, compute_message(assignment, u, p, store));
  }
  for (const int u : t.order) {
    for (int w : tree.neighbors(u)) {
      if (w == t.parent[static_cast<std::size_t>(u)]) continue;
      store.put(tree, u, w, compute_message(assignment, u, w, store));
    }
  }

  PropagationResult<V> result{std::move(store), {}};
  result.marginals.reserve(tree.size());
  for (std::size_t i = 0; i < tree.size(); ++i)
    result.marginals.push_back(
        marginal_at(assignment, static_cast<int>(i), result.messages));
  return result;
}

}  // namespace vbs
