#pragma once

#include <cstdint>
#include <vector>

#include "vbs/algebra.hpp"
#include "vbs/config.hpp"
#include "vbs/types.hpp"

namespace vbs {

// A relation over the configurations of its scope: entry 1 marks a member
// tuple. Combination intersects (natural join), marginalization projects.
// There is no removal for relations.
class BooleanRelation {
public:
  static constexpr bool entries_are_configurations = true;

  BooleanRelation(ModelPtr model, VarSet scope, std::vector<std::uint8_t> rows);

  static BooleanRelation identity(const ModelPtr& model, const VarSet& scope);
  static BooleanRelation zero(const ModelPtr& model, const VarSet& scope);

  const VarSet& scope() const { return scope_; }
  const ModelPtr& model() const { return model_; }
  const std::vector<std::uint8_t>& rows() const { return rows_; }
  ConfigIndexer indexer() const { return ConfigIndexer(*model_, scope_); }

  std::size_t entry_count() const { return rows_.size(); }
  double entry(std::size_t i) const { return rows_[i] ? 1.0 : 0.0; }
  double value_at(std::size_t config_index) const { return entry(config_index); }
  bool holds_at(std::size_t config_index) const { return rows_[config_index] != 0; }

  bool is_zero() const;
  /// A relation is normal when it has at least one member tuple.
  bool is_normal(double tolerance = 1e-9) const;

  friend BooleanRelation combine(const BooleanRelation& a,
                                 const BooleanRelation& b);
  friend BooleanRelation marginalize(const BooleanRelation& a,
                                     const VarSet& target);

private:
  ModelPtr model_;
  VarSet scope_;
  std::vector<std::uint8_t> rows_;
};

}  // namespace vbs
