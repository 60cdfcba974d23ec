#pragma once

#include <cstdint>
#include <vector>

#include "vbs/algebra.hpp"
#include "vbs/config.hpp"
#include "vbs/types.hpp"

namespace vbs {

// Commonality numbers indexed by the non-empty subsets of the scope's
// configuration space. A subset is a bitmask whose bit c stands for the
// configuration with dense index c; masks run 1 .. 2^k - 1 where k is the
// number of configurations. Scopes with more than kMaxConfigs configurations
// are refused, keeping subset tables within 2^20 entries.
class CommonalityTable {
public:
  static constexpr bool entries_are_configurations = false;
  static constexpr std::size_t kMaxConfigs = 20;

  /// `table` holds the commonalities of masks 1..2^k-1 in ascending mask order.
  CommonalityTable(ModelPtr model, VarSet scope, std::vector<double> table);

  static CommonalityTable identity(const ModelPtr& model, const VarSet& scope);
  static CommonalityTable zero(const ModelPtr& model, const VarSet& scope);

  /// `masses` has 2^k entries addressed by mask; the empty-set slot must be 0.
  static CommonalityTable from_masses(const ModelPtr& model, const VarSet& scope,
                                      const std::vector<double>& masses);
  /// Inverse transform; the empty-set slot of the result is always 0.
  std::vector<double> to_masses() const;

  const VarSet& scope() const { return scope_; }
  const ModelPtr& model() const { return model_; }
  ConfigIndexer indexer() const { return ConfigIndexer(*model_, scope_); }

  std::size_t config_count() const { return configs_; }
  std::size_t mask_count() const { return std::size_t{1} << configs_; }

  /// Commonality of a subset mask (mask != 0).
  double of_mask(std::uint32_t mask) const;

  std::size_t entry_count() const { return mask_count() - 1; }
  double entry(std::size_t i) const { return table_[i]; }

  double total_mass() const;
  bool is_zero() const;
  bool is_normal(double tolerance = 1e-9) const;
  bool is_positive_normal(double tolerance = 1e-9) const;
  CommonalityTable normalized() const;

  friend CommonalityTable combine(const CommonalityTable& a,
                                  const CommonalityTable& b);
  friend CommonalityTable marginalize(const CommonalityTable& a,
                                      const VarSet& target);
  friend CommonalityTable remove(const CommonalityTable& a,
                                 const CommonalityTable& b);
  friend CommonalityTable inverse(const CommonalityTable& a);

private:
  ModelPtr model_;
  VarSet scope_;
  std::size_t configs_;
  std::vector<double> table_;  // table_[m-1] = commonality of mask m
};

// Projects subset masks along a configuration projection: each configuration
// bit maps to the bit of its projected configuration.
class MaskProjection {
public:
  MaskProjection(const ConfigIndexer& from, const ConfigIndexer& onto);
  std::uint32_t operator()(std::uint32_t mask) const;

private:
  std::vector<std::uint32_t> bit_image_;
};

}  // namespace vbs
