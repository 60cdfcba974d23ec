#include "vbs/hypergraph.hpp"

#include <algorithm>
#include <queue>

namespace vbs {

Hypergraph::Hypergraph(ModelPtr model_in, std::vector<VarSet> edges_in)
    : model(std::move(model_in)), edges(std::move(edges_in)) {
  if (!model) throw ModelError("hypergraph needs a model");
  if (edges.empty()) throw ModelError("hypergraph needs at least one edge");
  for (const VarSet& e : edges) {
    for (VarId v : e) (void)model->var(v);
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      if (edges[i] == edges[j])
        throw ModelError("duplicate hyperedge " + model->render(edges[i]));
    }
  }
}

VarSet Hypergraph::variables() const {
  VarSet u;
  for (const VarSet& e : edges) u = u | e;
  return u;
}

std::vector<VarId> GrahamResult::deletions_in_round(int round) const {
  std::vector<VarId> out;
  for (const GrahamStep& s : trace) {
    if (s.kind == GrahamStep::Kind::DeleteVariable && s.round == round)
      out.push_back(s.var);
  }
  return out;
}

std::vector<VarSet> GrahamResult::absorbed_contents() const {
  std::vector<VarSet> out;
  for (const GrahamStep& s : trace) {
    if (s.kind == GrahamStep::Kind::AbsorbEdge) out.push_back(s.content);
  }
  return out;
}

namespace {

GrahamResult reduce(const Hypergraph& h, const VarSet& keep) {
  const std::size_t m = h.edges.size();
  std::vector<VarSet> cur(h.edges);
  std::vector<bool> alive(m, true);
  std::size_t alive_count = m;

  GrahamResult result;
  auto note_terminal = [&]() {
    if (alive_count != 1 || result.terminal_edge) return;
    for (std::size_t e = 0; e < m; ++e) {
      if (alive[e]) {
        result.terminal_edge = {static_cast<int>(e), cur[e]};
        return;
      }
    }
  };
  note_terminal();

  const VarSet all_vars = h.variables();
  int round = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    ++round;

    // Variable phase: deleting a variable never alters another variable's
    // degree, so eligibility settled at phase start stays settled.
    std::vector<VarId> eligible;
    for (VarId v : all_vars) {
      if (keep.contains(v)) continue;
      int degree = 0;
      for (std::size_t e = 0; e < m; ++e) {
        if (alive[e] && cur[e].contains(v)) ++degree;
      }
      if (degree == 1) eligible.push_back(v);
    }
    for (VarId v : eligible) {
      for (std::size_t e = 0; e < m; ++e) {
        if (!alive[e] || !cur[e].contains(v)) continue;
        GrahamStep step;
        step.kind = GrahamStep::Kind::DeleteVariable;
        step.round = round;
        step.var = v;
        step.edge = static_cast<int>(e);
        step.content = cur[e];
        result.trace.push_back(std::move(step));
        cur[e] = cur[e].without(v);
        changed = true;
        break;
      }
    }

    // Edge phase: absorptions only shrink the edge list, so one ascending
    // scan with live updates sees every opportunity of this round.
    for (std::size_t e = 0; e < m; ++e) {
      if (!alive[e]) continue;
      if (cur[e].empty() && alive_count == 1) {
        GrahamStep step;
        step.kind = GrahamStep::Kind::DropEmptyEdge;
        step.round = round;
        step.edge = static_cast<int>(e);
        step.content = cur[e];
        result.trace.push_back(std::move(step));
        alive[e] = false;
        --alive_count;
        changed = true;
        continue;
      }
      int absorber = -1;
      for (std::size_t e2 = 0; e2 < m; ++e2) {
        if (e2 == e || !alive[e2]) continue;
        if (!cur[e].subset_of(cur[e2])) continue;
        if (cur[e] == cur[e2] && e2 > e) continue;
        absorber = static_cast<int>(e2);
        break;
      }
      if (absorber < 0) continue;
      GrahamStep step;
      step.kind = GrahamStep::Kind::AbsorbEdge;
      step.round = round;
      step.edge = static_cast<int>(e);
      step.into = absorber;
      step.content = cur[e];
      result.trace.push_back(std::move(step));
      alive[e] = false;
      --alive_count;
      changed = true;
      note_terminal();
    }
  }

  result.fully_reduced = alive_count == 0;
  for (std::size_t e = 0; e < m; ++e) {
    if (alive[e]) result.residual.emplace_back(static_cast<int>(e), cur[e]);
  }
  return result;
}

}  // namespace

std::string render_step(const Model& model, const GrahamStep& step) {
  const std::string round = "round " + std::to_string(step.round) + ": ";
  switch (step.kind) {
    case GrahamStep::Kind::DeleteVariable:
      return round + "delete " + model.var(step.var).name + " from edge " +
             std::to_string(step.edge + 1) + " " + model.render(step.content);
    case GrahamStep::Kind::AbsorbEdge:
      return round + "absorb edge " + std::to_string(step.edge + 1) + " " +
             model.render(step.content) + " into edge " +
             std::to_string(step.into + 1);
    case GrahamStep::Kind::DropEmptyEdge:
      return round + "drop empty edge " + std::to_string(step.edge + 1);
  }
  throw InvariantError("unreachable step kind");
}

GrahamResult graham_test(const Hypergraph& h) { return reduce(h, VarSet{}); }

GrahamResult modified_graham(const Hypergraph& h, const VarSet& keep) {
  for (VarId v : keep) (void)h.model->var(v);
  return reduce(h, keep);
}

Hypergraph cover_hypertree(const Hypergraph& h, std::size_t* fill_ins) {
  if (fill_ins) *fill_ins = 0;
  if (graham_test(h).fully_reduced) return h;

  const VarSet vars = h.variables();
  const std::size_t n = h.model->size();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const VarSet& e : h.edges) {
    for (VarId a : e) {
      for (VarId b : e) {
        if (a != b) adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
      }
    }
  }

  std::vector<VarSet> current(h.edges);
  std::vector<VarId> remaining(vars.begin(), vars.end());
  std::vector<VarSet> clusters;
  while (!remaining.empty()) {
    VarId best = -1;
    std::size_t best_fill = 0, best_size = 0;
    for (VarId v : remaining) {
      std::vector<VarId> nb;
      for (VarId w : remaining) {
        if (w != v && adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)])
          nb.push_back(w);
      }
      std::size_t fill = 0;
      for (std::size_t i = 0; i < nb.size(); ++i) {
        for (std::size_t j = i + 1; j < nb.size(); ++j) {
          if (!adj[static_cast<std::size_t>(nb[i])][static_cast<std::size_t>(nb[j])])
            ++fill;
        }
      }
      const std::size_t size = nb.size() + 1;
      if (best < 0 || fill < best_fill ||
          (fill == best_fill && size < best_size)) {
        best = v;
        best_fill = fill;
        best_size = size;
      }
    }

    // Merge every edge still holding the chosen variable. The fill-in count
    // is the number of variables the merge adds beyond the widest such edge.
    VarSet cluster{best};
    std::size_t widest = 0;
    std::vector<VarSet> next;
    for (VarSet& e : current) {
      if (e.contains(best)) {
        widest = std::max(widest, e.size());
        cluster = cluster | e;
      } else {
        next.push_back(std::move(e));
      }
    }
    if (fill_ins) *fill_ins += cluster.size() - widest;

    const VarSet rest = cluster.without(best);
    for (VarId a : rest) {
      for (VarId b : rest) {
        if (a != b) adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
      }
    }
    if (!rest.empty()) next.push_back(rest);
    current = std::move(next);
    clusters.push_back(std::move(cluster));
    remaining.erase(std::find(remaining.begin(), remaining.end(), best));
  }

  std::vector<VarSet> maximal;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < clusters.size() && keep; ++j) {
      if (i == j) continue;
      if (clusters[i] == clusters[j]) {
        keep = i < j;
      } else if (clusters[i].subset_of(clusters[j])) {
        keep = false;
      }
    }
    if (keep) maximal.push_back(clusters[i]);
  }
  return Hypergraph(h.model, std::move(maximal));
}

MarkovTree::MarkovTree(ModelPtr model, std::vector<VarSet> nodes,
                       std::vector<std::pair<int, int>> links,
                       std::vector<int> construction_order)
    : model_(std::move(model)),
      nodes_(std::move(nodes)),
      links_(std::move(links)),
      order_(std::move(construction_order)) {
  separators_.reserve(links_.size());
  adjacency_.assign(nodes_.size(), {});
  for (const auto& [u, v] : links_) {
    separators_.push_back(nodes_[static_cast<std::size_t>(u)] &
                          nodes_[static_cast<std::size_t>(v)]);
    adjacency_[static_cast<std::size_t>(u)].push_back(v);
    adjacency_[static_cast<std::size_t>(v)].push_back(u);
  }
  for (std::vector<int>& nb : adjacency_) std::sort(nb.begin(), nb.end());
  validate();
}

std::optional<std::size_t> MarkovTree::edge_between(int u, int v) const {
  for (std::size_t e = 0; e < links_.size(); ++e) {
    if ((links_[e].first == u && links_[e].second == v) ||
        (links_[e].first == v && links_[e].second == u))
      return e;
  }
  return std::nullopt;
}

const VarSet& MarkovTree::separator_between(int u, int v) const {
  const auto e = edge_between(u, v);
  if (!e) throw InvariantError("nodes are not adjacent in the tree");
  return separators_[*e];
}

MarkovTree::Traversal MarkovTree::bfs_from(int root) const {
  Traversal t;
  t.parent.assign(nodes_.size(), -1);
  std::vector<bool> seen(nodes_.size(), false);
  std::queue<int> queue;
  queue.push(root);
  seen[static_cast<std::size_t>(root)] = true;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop();
    t.order.push_back(u);
    for (int w : neighbors(u)) {
      if (seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = true;
      t.parent[static_cast<std::size_t>(w)] = u;
      queue.push(w);
    }
  }
  return t;
}

void MarkovTree::validate() const {
  const std::size_t n = nodes_.size();
  if (n == 0) throw InvariantError("tree needs at least one node");
  if (links_.size() != n - 1)
    throw InvariantError("tree must have exactly one link less than nodes");
  for (const auto& [u, v] : links_) {
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n ||
        static_cast<std::size_t>(v) >= n || u == v)
      throw InvariantError("tree link endpoints out of range");
  }
  const Traversal t = bfs_from(0);
  if (t.order.size() != n) throw InvariantError("tree is not connected");

  // Markov property: the nodes holding any given variable form a subtree.
  VarSet all;
  for (const VarSet& h : nodes_) all = all | h;
  for (VarId v : all) {
    int first = -1, holding = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (nodes_[i].contains(v)) {
        if (first < 0) first = static_cast<int>(i);
        ++holding;
      }
    }
    std::queue<int> queue;
    std::vector<bool> seen(n, false);
    queue.push(first);
    seen[static_cast<std::size_t>(first)] = true;
    int reached = 0;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop();
      ++reached;
      for (int w : neighbors(u)) {
        if (!seen[static_cast<std::size_t>(w)] && nodes_[static_cast<std::size_t>(w)].contains(v)) {
          seen[static_cast<std::size_t>(w)] = true;
          queue.push(w);
        }
      }
    }
    if (reached != holding)
      throw InvariantError("variable " + model_->var(v).name +
                           " does not span a connected subtree");
  }

  if (order_.size() != n)
    throw InvariantError("construction order must list every node once");
  std::vector<bool> placed(n, false);
  for (std::size_t i = 0; i < order_.size(); ++i) {
    const int u = order_[i];
    if (u < 0 || static_cast<std::size_t>(u) >= n || placed[static_cast<std::size_t>(u)])
      throw InvariantError("construction order must list every node once");
    if (i > 0) {
      bool anchored = false;
      for (int w : neighbors(u)) {
        if (placed[static_cast<std::size_t>(w)]) {
          anchored = true;
          break;
        }
      }
      if (!anchored)
        throw InvariantError("construction order leaves a node unanchored");
    }
    placed[static_cast<std::size_t>(u)] = true;
  }
}

MarkovTree build_markov_tree(const Hypergraph& h) {
  const GrahamResult g = graham_test(h);
  if (!g.fully_reduced)
    throw ModelError("hypergraph does not reduce fully; cover it first");

  std::vector<std::pair<int, int>> links;
  std::vector<int> removal_order;
  for (const GrahamStep& s : g.trace) {
    if (s.kind == GrahamStep::Kind::AbsorbEdge) {
      links.emplace_back(s.edge, s.into);
      removal_order.push_back(s.edge);
    } else if (s.kind == GrahamStep::Kind::DropEmptyEdge) {
      removal_order.push_back(s.edge);
    }
  }
  std::vector<int> order(removal_order.rbegin(), removal_order.rend());
  return MarkovTree(h.model, h.edges, std::move(links), std::move(order));
}

}  // namespace vbs
