#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "vbs/commonality.hpp"
#include "vbs/potential.hpp"
#include "vbs/relation.hpp"
#include "vbs/types.hpp"

namespace vbs {

// Random generators for property tests. Every sampler exposes the same
// surface: random_scope / random_subscope plus element constructors for the
// classes the axioms quantify over.
class SamplerBase {
public:
  SamplerBase(ModelPtr model, std::uint64_t seed, int max_scope_vars)
      : model_(std::move(model)), rng_(seed), max_scope_vars_(max_scope_vars) {}

  const ModelPtr& model() const { return model_; }
  std::mt19937& rng() { return rng_; }

  VarSet random_scope() {
    const VarSet all = model_->all_vars();
    std::uniform_int_distribution<int> pct(0, 99);
    if (pct(rng_) < 5) return VarSet{};
    const int cap = std::min<int>(max_scope_vars_, static_cast<int>(all.size()));
    std::uniform_int_distribution<int> count(1, cap);
    return pick(all, count(rng_));
  }

  VarSet random_subscope(const VarSet& s) {
    if (s.empty()) return VarSet{};
    std::uniform_int_distribution<int> count(0, static_cast<int>(s.size()));
    return pick(s, count(rng_));
  }

protected:
  VarSet pick(const VarSet& from, int k) {
    std::vector<VarId> ids(from.begin(), from.end());
    std::shuffle(ids.begin(), ids.end(), rng_);
    ids.resize(static_cast<std::size_t>(k));
    return VarSet::from_unsorted(std::move(ids));
  }

  double positive_value() {
    std::uniform_real_distribution<double> d(0.05, 2.0);
    return d(rng_);
  }

  bool chance(double p) {
    std::bernoulli_distribution d(p);
    return d(rng_);
  }

  ModelPtr model_;
  std::mt19937 rng_;
  int max_scope_vars_;
};

class PotentialSampler : public SamplerBase {
public:
  using value_type = ProbabilityPotential;

  PotentialSampler(ModelPtr model, std::uint64_t seed, int max_scope_vars = 3)
      : SamplerBase(std::move(model), seed, max_scope_vars) {}

  ProbabilityPotential arbitrary(const VarSet& s) {
    std::vector<double> t(ConfigIndexer(*model_, s).size());
    for (double& v : t) v = chance(0.15) ? 0.0 : positive_value();
    return ProbabilityPotential(model_, s, std::move(t));
  }

  ProbabilityPotential positive_normal(const VarSet& s) {
    std::vector<double> t(ConfigIndexer(*model_, s).size());
    double sum = 0.0;
    for (double& v : t) {
      v = positive_value();
      sum += v;
    }
    for (double& v : t) v /= sum;
    return ProbabilityPotential(model_, s, std::move(t));
  }

  ProbabilityPotential normal(const VarSet& s) {
    ProbabilityPotential p = positive_normal(s);
    if (p.entry_count() < 2 || !chance(0.3)) return p;
    // Push some mass onto one entry so zeros appear in normal elements too.
    std::vector<double> t(p.table());
    std::uniform_int_distribution<std::size_t> at(0, t.size() - 1);
    const std::size_t hole = at(rng_);
    const std::size_t sink = (hole + 1) % t.size();
    t[sink] += t[hole];
    t[hole] = 0.0;
    return ProbabilityPotential(model_, s, std::move(t));
  }

  ProbabilityPotential normal_or_zero(const VarSet& s) {
    return chance(0.15) ? ProbabilityPotential::zero(model_, s) : normal(s);
  }

  ProbabilityPotential non_normal(const VarSet& s) {
    std::uniform_real_distribution<double> scale(1.5, 3.0);
    const double c = scale(rng_);
    std::vector<double> t(normal(s).table());
    for (double& v : t) v *= c;
    return ProbabilityPotential(model_, s, std::move(t));
  }
};

class CommonalitySampler : public SamplerBase {
public:
  using value_type = CommonalityTable;

  CommonalitySampler(ModelPtr model, std::uint64_t seed, int max_scope_vars = 2)
      : SamplerBase(std::move(model), seed, max_scope_vars) {}

  // Derived from a random mass assignment rather than free table entries:
  // free entries need not stay consistent under mass projection, so they
  // would not be closed under marginalization.
  CommonalityTable arbitrary(const VarSet& s) {
    const std::size_t n = ConfigIndexer(*model_, s).size();
    const std::size_t masks = std::size_t{1} << n;
    std::vector<double> mass(masks, 0.0);
    std::uniform_int_distribution<std::size_t> pick_mask(1, masks - 1);
    std::uniform_int_distribution<int> focal_count(1, 5);
    for (int i = focal_count(rng_); i > 0; --i)
      mass[pick_mask(rng_)] += positive_value();
    return CommonalityTable::from_masses(model_, s, mass);
  }

  CommonalityTable normal(const VarSet& s) { return random_belief(s, false); }

  CommonalityTable positive_normal(const VarSet& s) {
    return random_belief(s, true);
  }

  CommonalityTable normal_or_zero(const VarSet& s) {
    return chance(0.15) ? CommonalityTable::zero(model_, s) : normal(s);
  }

  CommonalityTable non_normal(const VarSet& s) {
    std::uniform_real_distribution<double> scale(1.5, 3.0);
    const double c = scale(rng_);
    CommonalityTable q = normal(s);
    std::vector<double> t;
    t.reserve(q.entry_count());
    for (std::size_t i = 0; i < q.entry_count(); ++i) t.push_back(q.entry(i) * c);
    return CommonalityTable(model_, s, std::move(t));
  }

private:
  /// Random mass assignment over a handful of focal sets, total mass one.
  /// With `everywhere` the full configuration set is focal, which makes all
  /// commonalities strictly positive.
  CommonalityTable random_belief(const VarSet& s, bool everywhere) {
    const std::size_t n = ConfigIndexer(*model_, s).size();
    const std::size_t masks = std::size_t{1} << n;
    std::vector<double> mass(masks, 0.0);
    std::uniform_int_distribution<std::size_t> pick_mask(1, masks - 1);
    std::uniform_int_distribution<int> focal_count(1, 5);
    const int focals = focal_count(rng_);
    std::exponential_distribution<double> weight(1.0);
    for (int i = 0; i < focals; ++i) mass[pick_mask(rng_)] += weight(rng_) + 1e-3;
    if (everywhere) mass[masks - 1] += 0.25;
    double sum = 0.0;
    for (double v : mass) sum += v;
    for (double& v : mass) v /= sum;
    mass[0] = 0.0;
    return CommonalityTable::from_masses(model_, s, mass);
  }
};

class RelationSampler : public SamplerBase {
public:
  using value_type = BooleanRelation;

  RelationSampler(ModelPtr model, std::uint64_t seed, int max_scope_vars = 3)
      : SamplerBase(std::move(model), seed, max_scope_vars) {}

  BooleanRelation arbitrary(const VarSet& s) {
    std::vector<std::uint8_t> rows(ConfigIndexer(*model_, s).size());
    for (std::uint8_t& r : rows) r = chance(0.5) ? 1 : 0;
    return BooleanRelation(model_, s, std::move(rows));
  }

  BooleanRelation normal(const VarSet& s) {
    BooleanRelation r = arbitrary(s);
    if (r.is_normal()) return r;
    std::vector<std::uint8_t> rows(r.rows());
    std::uniform_int_distribution<std::size_t> at(0, rows.size() - 1);
    rows[at(rng_)] = 1;
    return BooleanRelation(model_, s, std::move(rows));
  }

  BooleanRelation normal_or_zero(const VarSet& s) {
    return chance(0.15) ? BooleanRelation::zero(model_, s) : normal(s);
  }

  BooleanRelation non_normal(const VarSet& s) {
    return BooleanRelation::zero(model_, s);
  }
};

/// A compact model for property tests: `vars` variables named V0, V1, ...
/// with the given frame sizes cycling through `frames`.
inline ModelPtr make_test_model(int vars, std::vector<int> frames = {2}) {
  auto m = std::make_shared<Model>();
  for (int i = 0; i < vars; ++i) {
    std::vector<std::string> frame;
    const int fs = frames[static_cast<std::size_t>(i) % frames.size()];
    for (int j = 0; j < fs; ++j) frame.push_back("v" + std::to_string(j));
    m->add_variable("V" + std::to_string(i), std::move(frame));
  }
  return m;
}

}  // namespace vbs
