#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vbs/commonality.hpp"
#include "vbs/hypergraph.hpp"
#include "vbs/potential.hpp"
#include "vbs/relation.hpp"
#include "vbs/setchain.hpp"
#include "vbs/types.hpp"

namespace vbs {

enum class InstanceKind { Probability, Commonality, Boolean, HypergraphOnly };

std::string_view instance_name(InstanceKind kind);

// Parsed model or hypergraph file. Model files open with
//   instance probability|commonality|boolean
// followed by `var <name> <value>...` rows and `factor <name>...` rows, each
// factor followed by its table values (dense configuration order, last listed
// variable fastest; commonality factors list the 2^k-1 subset values in
// ascending mask order). Hypergraph files open with `hypergraph`, may pin
// variables with `var` rows (default frame: true false) and list
// `edge <name>...` rows. `#` starts a comment.
struct LoadedModel {
  InstanceKind kind = InstanceKind::HypergraphOnly;
  ModelPtr model;
  std::vector<VarSet> scopes;
  std::vector<std::vector<double>> tables;  // empty for hypergraph files

  Hypergraph hypergraph() const;  // distinct scopes, first-appearance order
};

LoadedModel parse_model_text(std::string_view text,
                             const std::string& origin = "<input>");
LoadedModel load_model_file(const std::string& path);

std::vector<ProbabilityPotential> to_potentials(const LoadedModel& loaded);
std::vector<CommonalityTable> to_commonalities(const LoadedModel& loaded);
std::vector<BooleanRelation> to_relations(const LoadedModel& loaded);

// Chain files carry a computed chain: numbering plus one factor block per
// position with the marginal table and, from position 2 on, the separator
// marginal. Values are written with enough digits to reload bit-identically.
struct ChainFile {
  InstanceKind kind = InstanceKind::Probability;
  std::vector<int> numbering;  // tree node ids by position
  struct Factor {
    int position = 0;
    int node = -1;
    VarSet scope;
    std::vector<double> values;
    std::optional<VarSet> separator_scope;
    std::vector<double> separator_values;
  };
  std::vector<Factor> factors;
};

std::string render_chain(const ChainFile& chain, const Model& model);
ChainFile parse_chain_text(std::string_view text, const Model& model,
                           const std::string& origin = "<input>");
ChainFile load_chain_file(const std::string& path, const Model& model);

template <Removable V>
ChainFile chain_to_file(const SetChain<V>& chain, InstanceKind kind) {
  ChainFile out;
  out.kind = kind;
  out.numbering = chain.numbering;
  for (const SetChainFactor<V>& f : chain.factors) {
    ChainFile::Factor cf;
    cf.position = f.position;
    cf.node = f.node;
    cf.scope = f.marginal.scope();
    for (std::size_t i = 0; i < f.marginal.entry_count(); ++i)
      cf.values.push_back(f.marginal.entry(i));
    if (f.separator_marginal) {
      cf.separator_scope = f.separator_marginal->scope();
      for (std::size_t i = 0; i < f.separator_marginal->entry_count(); ++i)
        cf.separator_values.push_back(f.separator_marginal->entry(i));
    }
    out.factors.push_back(std::move(cf));
  }
  return out;
}

template <Removable V>
SetChain<V> chain_from_file(const ChainFile& file, const ModelPtr& model) {
  SetChain<V> chain;
  chain.numbering = file.numbering;
  for (const ChainFile::Factor& cf : file.factors) {
    SetChainFactor<V> f{cf.position, cf.node, V(model, cf.scope, cf.values), {}};
    if (cf.separator_scope)
      f.separator_marginal = V(model, *cf.separator_scope, cf.separator_values);
    chain.factors.push_back(std::move(f));
  }
  return chain;
}

}  // namespace vbs
