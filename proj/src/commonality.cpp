#include "vbs/commonality.hpp"

#include <bit>
#include <cmath>

namespace vbs {

namespace {

std::size_t checked_config_count(const Model& model, const VarSet& scope) {
  const ConfigIndexer idx(model, scope);
  if (idx.size() > CommonalityTable::kMaxConfigs)
    throw CapabilityError("commonality scope " + model.render(scope) + " has " +
                          std::to_string(idx.size()) +
                          " configurations, limit is " +
                          std::to_string(CommonalityTable::kMaxConfigs));
  return idx.size();
}

void validate_entries(const std::vector<double>& values) {
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0)
      throw ModelError("commonality entries must be finite and non-negative");
  }
}

/// In-place fast superset sum: f[A] <- sum over B >= A of f[B].
void superset_zeta(std::vector<double>& f, std::size_t bits) {
  for (std::size_t i = 0; i < bits; ++i) {
    const std::size_t high = std::size_t{1} << i;
    for (std::size_t a = 0; a < f.size(); ++a) {
      if (!(a & high)) f[a] += f[a | high];
    }
  }
}

/// Inverse of superset_zeta.
void superset_moebius(std::vector<double>& f, std::size_t bits) {
  for (std::size_t i = 0; i < bits; ++i) {
    const std::size_t high = std::size_t{1} << i;
    for (std::size_t a = 0; a < f.size(); ++a) {
      if (!(a & high)) f[a] -= f[a | high];
    }
  }
}

}  // namespace

CommonalityTable::CommonalityTable(ModelPtr model, VarSet scope,
                                   std::vector<double> table)
    : model_(std::move(model)),
      scope_(std::move(scope)),
      configs_(0),
      table_(std::move(table)) {
  if (!model_) throw ModelError("commonality table needs a model");
  configs_ = checked_config_count(*model_, scope_);
  if (table_.size() != mask_count() - 1)
    throw ModelError("commonality table has " + std::to_string(table_.size()) +
                     " entries, scope " + model_->render(scope_) + " needs " +
                     std::to_string(mask_count() - 1));
  validate_entries(table_);
}

CommonalityTable CommonalityTable::identity(const ModelPtr& model,
                                            const VarSet& scope) {
  const std::size_t n = checked_config_count(*model, scope);
  return CommonalityTable(model, scope,
                          std::vector<double>((std::size_t{1} << n) - 1, 1.0));
}

CommonalityTable CommonalityTable::zero(const ModelPtr& model,
                                        const VarSet& scope) {
  const std::size_t n = checked_config_count(*model, scope);
  return CommonalityTable(model, scope,
                          std::vector<double>((std::size_t{1} << n) - 1, 0.0));
}

CommonalityTable CommonalityTable::from_masses(const ModelPtr& model,
                                               const VarSet& scope,
                                               const std::vector<double>& masses) {
  const std::size_t n = checked_config_count(*model, scope);
  const std::size_t full = std::size_t{1} << n;
  if (masses.size() != full)
    throw ModelError("mass table needs one entry per subset mask");
  if (masses[0] != 0.0)
    throw ModelError("the empty-set mass slot must be zero");
  std::vector<double> q(masses);
  superset_zeta(q, n);
  return CommonalityTable(model, scope,
                          std::vector<double>(q.begin() + 1, q.end()));
}

std::vector<double> CommonalityTable::to_masses() const {
  std::vector<double> m(mask_count(), 0.0);
  for (std::size_t i = 1; i < mask_count(); ++i) m[i] = table_[i - 1];
  superset_moebius(m, configs_);
  m[0] = 0.0;
  return m;
}

double CommonalityTable::of_mask(std::uint32_t mask) const {
  if (mask == 0 || mask >= mask_count())
    throw ModelError("subset mask out of range");
  return table_[mask - 1];
}

double CommonalityTable::total_mass() const {
  const std::vector<double> m = to_masses();
  double s = 0.0;
  for (double v : m) s += v;
  return s;
}

bool CommonalityTable::is_zero() const {
  for (double v : table_) {
    if (v != 0.0) return false;
  }
  return true;
}

bool CommonalityTable::is_normal(double tolerance) const {
  return std::fabs(total_mass() - 1.0) <= tolerance;
}

bool CommonalityTable::is_positive_normal(double tolerance) const {
  if (!is_normal(tolerance)) return false;
  for (double v : table_) {
    if (v <= 0.0) return false;
  }
  return true;
}

CommonalityTable CommonalityTable::normalized() const {
  const double t = total_mass();
  if (t == 0.0) throw ModelError("cannot normalize a zero commonality table");
  std::vector<double> out(table_);
  for (double& v : out) v /= t;
  return CommonalityTable(model_, scope_, std::move(out));
}

CommonalityTable combine(const CommonalityTable& a, const CommonalityTable& b) {
  detail::require_same_model(a.model_, b.model_);
  const VarSet u = a.scope_ | b.scope_;
  detail::count_combination(u.size());
  const ConfigIndexer iu(*a.model_, u);
  if (iu.size() > CommonalityTable::kMaxConfigs)
    throw CapabilityError("combination scope " + a.model_->render(u) +
                          " exceeds the commonality configuration limit");
  const MaskProjection pa(iu, a.indexer());
  const MaskProjection pb(iu, b.indexer());
  const std::size_t masks = std::size_t{1} << iu.size();
  std::vector<double> out(masks - 1);
  for (std::uint32_t m = 1; m < masks; ++m)
    out[m - 1] = a.of_mask(pa(m)) * b.of_mask(pb(m));
  return CommonalityTable(a.model_, u, std::move(out));
}

CommonalityTable marginalize(const CommonalityTable& a, const VarSet& target) {
  if (!target.subset_of(a.scope_))
    throw ModelError("marginalization target " + a.model_->render(target) +
                     " is not a subscope of " + a.model_->render(a.scope_));
  detail::count_marginalization();
  if (target == a.scope_) return a;
  const std::vector<double> m = a.to_masses();
  const ConfigIndexer onto(*a.model_, target);
  const MaskProjection proj(a.indexer(), onto);
  std::vector<double> out(std::size_t{1} << onto.size(), 0.0);
  for (std::uint32_t mask = 1; mask < m.size(); ++mask)
    out[proj(mask)] += m[mask];
  out[0] = 0.0;
  return CommonalityTable::from_masses(a.model_, target, out);
}

CommonalityTable remove(const CommonalityTable& a, const CommonalityTable& b) {
  detail::require_same_model(a.model_, b.model_);
  const VarSet u = a.scope_ | b.scope_;
  detail::count_removal(u.size());
  const ConfigIndexer iu(*a.model_, u);
  if (iu.size() > CommonalityTable::kMaxConfigs)
    throw CapabilityError("removal scope " + a.model_->render(u) +
                          " exceeds the commonality configuration limit");
  const MaskProjection pa(iu, a.indexer());
  const MaskProjection pb(iu, b.indexer());
  const std::size_t masks = std::size_t{1} << iu.size();
  std::vector<double> out(masks - 1);
  for (std::uint32_t m = 1; m < masks; ++m)
    out[m - 1] = a.of_mask(pa(m)) * detail::pseudo_inverse(b.of_mask(pb(m)));
  return CommonalityTable(a.model_, u, std::move(out));
}

CommonalityTable inverse(const CommonalityTable& a) {
  detail::count_removal(a.scope_.size());
  std::vector<double> out(a.table_.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = detail::pseudo_inverse(a.table_[i]);
  return CommonalityTable(a.model_, a.scope_, std::move(out));
}

MaskProjection::MaskProjection(const ConfigIndexer& from,
                               const ConfigIndexer& onto) {
  const IndexProjection proj(from, onto);
  bit_image_.resize(from.size());
  for (std::size_t c = 0; c < from.size(); ++c)
    bit_image_[c] = static_cast<std::uint32_t>(proj(c));
}

std::uint32_t MaskProjection::operator()(std::uint32_t mask) const {
  std::uint32_t out = 0;
  while (mask != 0) {
    const int bit = std::countr_zero(mask);
    out |= std::uint32_t{1} << bit_image_[static_cast<std::size_t>(bit)];
    mask &= mask - 1;
  }
  return out;
}

}  // namespace vbs
