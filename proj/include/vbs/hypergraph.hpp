#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "vbs/types.hpp"

namespace vbs {

struct Hypergraph {
  ModelPtr model;
  std::vector<VarSet> edges;

  Hypergraph(ModelPtr model, std::vector<VarSet> edges);
  VarSet variables() const;
};

// One reduction step. Steps are grouped into rounds; within a round all
// currently eligible variable deletions run first in ascending variable id,
// then edge absorptions in ascending edge index. An edge equal to another is
// absorbed by the lower-indexed one. `content` is the acted-on edge's
// content at the moment the step applied.
struct GrahamStep {
  enum class Kind { DeleteVariable, AbsorbEdge, DropEmptyEdge };

  Kind kind = Kind::DeleteVariable;
  int round = 0;
  VarId var = -1;   // DeleteVariable only
  int edge = -1;    // original edge index acted on
  int into = -1;    // absorbing edge, AbsorbEdge only
  VarSet content;
};

struct GrahamResult {
  bool fully_reduced = false;
  std::vector<GrahamStep> trace;
  /// Surviving edges (original index, final content), ascending index.
  std::vector<std::pair<int, VarSet>> residual;
  /// The edge left when the count first reached one, with its content then.
  std::optional<std::pair<int, VarSet>> terminal_edge;

  std::vector<VarId> deletions_in_round(int round) const;
  std::vector<VarSet> absorbed_contents() const;
};

/// One line describing a reduction step, e.g.
/// "round 1: delete X4 from edge 4 {X4, X5}".
std::string render_step(const Model& model, const GrahamStep& step);

/// Full reduction; fully_reduced says whether the hypergraph is a hypertree.
GrahamResult graham_test(const Hypergraph& h);

/// Same reduction but variables in `keep` are never deleted.
GrahamResult modified_graham(const Hypergraph& h, const VarSet& keep);

/// Returns h itself when it already reduces fully; otherwise builds a
/// covering hypertree via min-fill elimination. Every input edge is contained
/// in some output edge. `fill_ins`, when given, receives the number of
/// variables the eliminations added beyond the widest edge they merged, so
/// every output edge size is at most the widest input edge plus this count.
Hypergraph cover_hypertree(const Hypergraph& h, std::size_t* fill_ins = nullptr);

class MarkovTree {
public:
  MarkovTree(ModelPtr model, std::vector<VarSet> nodes,
             std::vector<std::pair<int, int>> links,
             std::vector<int> construction_order);

  const ModelPtr& model() const { return model_; }
  std::size_t size() const { return nodes_.size(); }
  const VarSet& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  const std::vector<VarSet>& nodes() const { return nodes_; }

  std::size_t link_count() const { return links_.size(); }
  std::pair<int, int> link(std::size_t e) const { return links_[e]; }
  const VarSet& link_separator(std::size_t e) const { return separators_[e]; }

  const std::vector<int>& neighbors(int i) const {
    return adjacency_[static_cast<std::size_t>(i)];
  }
  std::optional<std::size_t> edge_between(int u, int v) const;
  const VarSet& separator_between(int u, int v) const;

  const std::vector<int>& construction_order() const { return order_; }

  struct Traversal {
    std::vector<int> order;   // root first, neighbors visited ascending
    std::vector<int> parent;  // -1 for the root
  };
  Traversal bfs_from(int root) const;

  /// Checks tree shape, the Markov property (each variable spans a connected
  /// subtree) and that the construction order anchors every later node to an
  /// earlier neighbor. Throws InvariantError.
  void validate() const;

private:
  ModelPtr model_;
  std::vector<VarSet> nodes_;
  std::vector<std::pair<int, int>> links_;
  std::vector<VarSet> separators_;
  std::vector<int> order_;
  std::vector<std::vector<int>> adjacency_;
};

/// Builds the Markov tree of a fully reducible hypergraph: each absorption
/// becomes a tree link and construction order is the reverse of the edge
/// removal order, so the terminal edge comes first.
MarkovTree build_markov_tree(const Hypergraph& h);

}  // namespace vbs
