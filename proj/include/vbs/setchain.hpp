#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "vbs/algebra.hpp"
#include "vbs/hypergraph.hpp"
#include "vbs/propagation.hpp"
#include "vbs/types.hpp"

namespace vbs {

/// Chain positions are 1-based; the returned sequence lists tree nodes by
/// position, root first. Every later node touches exactly one earlier node.
inline std::vector<int> order_nodes(const MarkovTree& tree,
                                    std::optional<int> root_choice = {}) {
  const int root = root_choice.value_or(tree.construction_order().front());
  if (root < 0 || static_cast<std::size_t>(root) >= tree.size())
    throw ModelError("root node out of range");
  return tree.bfs_from(root).order;
}

template <Removable V>
struct SetChainFactor {
  int position;  // 1-based
  int node;      // tree node index
  V marginal;    // scope: the node's full variable set
  std::optional<V> separator_marginal;  // toward the predecessor; none at 1
};

template <Removable V>
struct SetChain {
  std::vector<int> numbering;             // numbering[k-1] = node at position k
  std::vector<SetChainFactor<V>> factors;  // ascending position
};

struct BuildChainOptions {
  bool memoize = true;
};

/// Called after each elimination step with the step position, the still
/// working valuations (positions 1..k-1) and the factors finalized so far
/// (positions k..n, ascending). Fired a final time with k = 1.
template <Removable V>
using ChainObserver = std::function<void(
    int k, const std::vector<V>& working,
    const std::vector<SetChainFactor<V>>& finalized)>;

namespace detail {

template <Valuation V>
bool exact_equal(const V& a, const V& b) {
  if (a.scope() != b.scope()) return false;
  for (std::size_t i = 0; i < a.entry_count(); ++i) {
    if (a.entry(i) != b.entry(i)) return false;
  }
  return true;
}

}  // namespace detail

// Eliminates tree nodes from the last position down to the second. Each step
// runs an inward message pass over the remaining prefix rooted at the
// position being eliminated, converts that node's valuation into a chain
// factor (marginal plus separator marginal) and folds the separator marginal
// back into its predecessor. Messages are cached across steps keyed by
// directed tree link; a cache entry stays valid while nothing on the sending
// side changed, which keeps repeated passes from redoing settled work.
template <Removable V>
SetChain<V> build_setchain(const TreeAssignment<V>& assignment,
                           std::optional<int> root_choice = {},
                           const BuildChainOptions& options = {},
                           ChainObserver<V> observer = nullptr) {
  const MarkovTree& tree = assignment.tree();
  const int n = static_cast<int>(tree.size());

  SetChain<V> chain;
  chain.numbering = order_nodes(tree, root_choice);

  std::vector<int> pos_of(tree.size(), 0);  // node -> 1-based position
  for (int k = 1; k <= n; ++k)
    pos_of[static_cast<std::size_t>(chain.numbering[static_cast<std::size_t>(k - 1)])] = k;

  // Working valuations by position (index 0 unused).
  std::vector<V> working;
  working.reserve(static_cast<std::size_t>(n) + 1);
  working.push_back(V::identity(tree.model(), VarSet{}));
  for (int k = 1; k <= n; ++k)
    working.push_back(assignment.value(chain.numbering[static_cast<std::size_t>(k - 1)]));

  // Message cache, two directed slots per tree link, with the positions on
  // the sending side of each slot.
  struct CacheSlot {
    std::optional<V> value;
    std::uint64_t stamp = 0;
  };
  std::vector<CacheSlot> cache(2 * tree.link_count());
  std::vector<std::vector<int>> away(2 * tree.link_count());
  for (std::size_t e = 0; e < tree.link_count(); ++e) {
    const auto [a, b] = tree.link(e);
    // Side of `a` with the link cut, by BFS that refuses to cross it.
    std::vector<int> side{a};
    std::vector<bool> seen(tree.size(), false);
    seen[static_cast<std::size_t>(a)] = true;
    seen[static_cast<std::size_t>(b)] = true;
    for (std::size_t i = 0; i < side.size(); ++i) {
      for (int w : tree.neighbors(side[i])) {
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = true;
          side.push_back(w);
        }
      }
    }
    auto& from_a = away[2 * e];
    for (int u : side) from_a.push_back(pos_of[static_cast<std::size_t>(u)]);
    auto& from_b = away[2 * e + 1];
    for (int k = 1; k <= n; ++k) {
      if (std::find(from_a.begin(), from_a.end(), k) == from_a.end())
        from_b.push_back(k);
    }
  }
  auto slot_index = [&](int from_node, int to_node) {
    const auto e = tree.edge_between(from_node, to_node);
    if (!e) throw SchedulingError("message endpoints are not adjacent");
    return 2 * *e + (tree.link(*e).first == from_node ? std::size_t{0} : std::size_t{1});
  };

  std::uint64_t clock = 0;
  std::vector<std::uint64_t> last_changed(static_cast<std::size_t>(n) + 1, 0);
  auto cache_valid = [&](std::size_t slot) {
    if (!options.memoize || !cache[slot].value) return false;
    for (int p : away[slot]) {
      if (last_changed[static_cast<std::size_t>(p)] > cache[slot].stamp)
        return false;
    }
    return true;
  };

  std::vector<std::optional<SetChainFactor<V>>> factors(static_cast<std::size_t>(n) + 1);
  auto notify = [&](int k) {
    if (!observer) return;
    std::vector<V> active(working.begin() + 1, working.begin() + k);
    std::vector<SetChainFactor<V>> done;
    for (int p = k; p <= n; ++p) done.push_back(*factors[static_cast<std::size_t>(p)]);
    observer(k, active, done);
  };

  for (int k = n; k >= 2; --k) {
    // Inward pass over positions 1..k rooted at k. BFS order then reversed
    // guarantees children send before their parent does.
    std::vector<int> order;
    std::vector<int> parent(static_cast<std::size_t>(n) + 1, 0);
    {
      std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
      order.push_back(k);
      seen[static_cast<std::size_t>(k)] = true;
      for (std::size_t i = 0; i < order.size(); ++i) {
        const int u = order[i];
        for (int w : tree.neighbors(chain.numbering[static_cast<std::size_t>(u - 1)])) {
          const int p = pos_of[static_cast<std::size_t>(w)];
          if (p <= k && !seen[static_cast<std::size_t>(p)]) {
            seen[static_cast<std::size_t>(p)] = true;
            parent[static_cast<std::size_t>(p)] = u;
            order.push_back(p);
          }
        }
      }
    }
    const int kplus = order.size() > 1 ? order[1] : 0;
    if (order.size() != static_cast<std::size_t>(k) || kplus == 0)
      throw InvariantError("chain prefix is not connected");

    std::vector<std::optional<V>> sent(static_cast<std::size_t>(n) + 1);
    std::optional<V> stash;  // the predecessor's pre-strip valuation
    for (std::size_t oi = order.size(); oi-- > 1;) {
      const int i = order[oi];
      const int j = parent[static_cast<std::size_t>(i)];
      const int i_node = chain.numbering[static_cast<std::size_t>(i - 1)];
      const int j_node = chain.numbering[static_cast<std::size_t>(j - 1)];
      const std::size_t slot = slot_index(i_node, j_node);

      if (cache_valid(slot) && i != kplus) {
        sent[static_cast<std::size_t>(i)] = *cache[slot].value;
        continue;  // the strip was a no-op when this message last ran
      }

      V gathered = working[static_cast<std::size_t>(i)];
      for (std::size_t ci = 2; ci < order.size(); ++ci) {
        const int c = order[ci];
        if (parent[static_cast<std::size_t>(c)] != i) continue;
        gathered = combine(gathered, *sent[static_cast<std::size_t>(c)]);
      }

      V message = cache_valid(slot)
                      ? *cache[slot].value
                      : adjust_to_scope(gathered,
                                        tree.separator_between(i_node, j_node));
      cache[slot] = CacheSlot{message, clock};
      sent[static_cast<std::size_t>(i)] = message;

      if (i == kplus) {
        stash = std::move(gathered);
      } else {
        V stripped = remove(gathered, message);
        if (!detail::exact_equal(stripped, working[static_cast<std::size_t>(i)])) {
          working[static_cast<std::size_t>(i)] = std::move(stripped);
          last_changed[static_cast<std::size_t>(i)] = ++clock;
        }
      }
    }

    const V& inbound = *sent[static_cast<std::size_t>(kplus)];
    const int k_node = chain.numbering[static_cast<std::size_t>(k - 1)];
    const int kp_node = chain.numbering[static_cast<std::size_t>(kplus - 1)];
    V r = adjust_to_scope(combine(working[static_cast<std::size_t>(k)], inbound),
                          tree.node(k_node));
    V s = marginalize(r, tree.node(k_node) & tree.node(kp_node));
    working[static_cast<std::size_t>(kplus)] = combine(remove(*stash, inbound), s);
    last_changed[static_cast<std::size_t>(kplus)] = ++clock;
    last_changed[static_cast<std::size_t>(k)] = ++clock;

    factors[static_cast<std::size_t>(k)] =
        SetChainFactor<V>{k, k_node, std::move(r), std::move(s)};
    notify(k);
  }

  factors[1] = SetChainFactor<V>{
      1, chain.numbering[0],
      adjust_to_scope(working[1], tree.node(chain.numbering[0])), std::nullopt};
  notify(1);

  chain.factors.reserve(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k)
    chain.factors.push_back(std::move(*factors[static_cast<std::size_t>(k)]));
  return chain;
}

/// Folds the chain back into one valuation over the union of node scopes:
/// the head marginal combined with every later marginal divided by its
/// separator marginal.
template <Removable V>
V reconstruct_joint(const SetChain<V>& chain) {
  if (chain.factors.empty()) throw ModelError("chain has no factors");
  V acc = chain.factors.front().marginal;
  for (std::size_t k = 1; k < chain.factors.size(); ++k) {
    const SetChainFactor<V>& f = chain.factors[k];
    acc = combine(acc, remove(f.marginal, *f.separator_marginal));
  }
  return acc;
}

template <Removable V>
struct ChainCheck {
  std::vector<double> node_deviation;   // per chain position
  double reconstruction_deviation = 0;  // chain product vs the joint
  double max_deviation = 0;
};

/// Compares every chain factor against the brute joint of the assignment,
/// and the reassembled chain product against that joint.
template <Removable V>
ChainCheck<V> verify_chain(const SetChain<V>& chain,
                           const TreeAssignment<V>& assignment) {
  const V joint = assignment.joint();
  ChainCheck<V> check;
  for (const SetChainFactor<V>& f : chain.factors) {
    const V expected =
        marginalize(joint, assignment.tree().node(f.node));
    check.node_deviation.push_back(max_abs_diff(f.marginal, expected));
    if (f.separator_marginal) {
      const double sep_dev = max_abs_diff(
          *f.separator_marginal,
          marginalize(expected, f.separator_marginal->scope()));
      if (sep_dev > check.node_deviation.back())
        check.node_deviation.back() = sep_dev;
    }
  }
  check.reconstruction_deviation = max_abs_diff(reconstruct_joint(chain), joint);
  check.max_deviation = check.reconstruction_deviation;
  for (double d : check.node_deviation) {
    if (d > check.max_deviation) check.max_deviation = d;
  }
  return check;
}

}  // namespace vbs
