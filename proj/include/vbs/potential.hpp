#pragma once

#include <vector>

#include "vbs/algebra.hpp"
#include "vbs/config.hpp"
#include "vbs/types.hpp"

namespace vbs {

// Dense non-negative table over the configurations of its scope. Stored
// unnormalized; normalized() is an explicit step. An empty scope holds a
// single scalar entry.
class ProbabilityPotential {
public:
  static constexpr bool entries_are_configurations = true;

  ProbabilityPotential(ModelPtr model, VarSet scope, std::vector<double> table);

  static ProbabilityPotential identity(const ModelPtr& model, const VarSet& scope);
  static ProbabilityPotential zero(const ModelPtr& model, const VarSet& scope);

  const VarSet& scope() const { return scope_; }
  const ModelPtr& model() const { return model_; }
  const std::vector<double>& table() const { return table_; }
  ConfigIndexer indexer() const { return ConfigIndexer(*model_, scope_); }

  std::size_t entry_count() const { return table_.size(); }
  double entry(std::size_t i) const { return table_[i]; }
  double value_at(std::size_t config_index) const { return table_[config_index]; }
  double value_at(const Configuration& c) const;

  double total() const;
  bool is_zero() const;
  bool is_normal(double tolerance = 1e-9) const;
  bool is_positive_normal(double tolerance = 1e-9) const;
  ProbabilityPotential normalized() const;

  friend ProbabilityPotential combine(const ProbabilityPotential& a,
                                      const ProbabilityPotential& b);
  friend ProbabilityPotential marginalize(const ProbabilityPotential& a,
                                          const VarSet& target);
  friend ProbabilityPotential remove(const ProbabilityPotential& a,
                                     const ProbabilityPotential& b);
  friend ProbabilityPotential inverse(const ProbabilityPotential& a);

private:
  ModelPtr model_;
  VarSet scope_;
  std::vector<double> table_;
};

}  // namespace vbs
