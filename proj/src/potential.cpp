#include "vbs/potential.hpp"

#include <cmath>

namespace vbs {

namespace {

void validate_table(const Model& model, const VarSet& scope,
                    const std::vector<double>& table) {
  const ConfigIndexer idx(model, scope);
  if (table.size() != idx.size())
    throw ModelError("table has " + std::to_string(table.size()) +
                     " entries, scope " + model.render(scope) + " needs " +
                     std::to_string(idx.size()));
  for (double v : table) {
    if (!std::isfinite(v) || v < 0.0)
      throw ModelError("table entries must be finite and non-negative");
  }
}

ProbabilityPotential delete_variable(const ProbabilityPotential& a, VarId v) {
  const VarSet target = a.scope().without(v);
  const ConfigIndexer from(*a.model(), a.scope());
  const ConfigIndexer onto(*a.model(), target);
  const IndexProjection proj(from, onto);
  std::vector<double> out(onto.size(), 0.0);
  for (std::size_t i = 0; i < from.size(); ++i) out[proj(i)] += a.table()[i];
  return ProbabilityPotential(a.model(), target, std::move(out));
}

}  // namespace

ProbabilityPotential::ProbabilityPotential(ModelPtr model, VarSet scope,
                                           std::vector<double> table)
    : model_(std::move(model)), scope_(std::move(scope)), table_(std::move(table)) {
  if (!model_) throw ModelError("potential needs a model");
  validate_table(*model_, scope_, table_);
}

ProbabilityPotential ProbabilityPotential::identity(const ModelPtr& model,
                                                    const VarSet& scope) {
  const ConfigIndexer idx(*model, scope);
  return ProbabilityPotential(model, scope, std::vector<double>(idx.size(), 1.0));
}

ProbabilityPotential ProbabilityPotential::zero(const ModelPtr& model,
                                                const VarSet& scope) {
  const ConfigIndexer idx(*model, scope);
  return ProbabilityPotential(model, scope, std::vector<double>(idx.size(), 0.0));
}

double ProbabilityPotential::value_at(const Configuration& c) const {
  const Configuration onto = c.project(scope_);
  return table_[indexer().index_of(onto.values)];
}

double ProbabilityPotential::total() const {
  double s = 0.0;
  for (double v : table_) s += v;
  return s;
}

bool ProbabilityPotential::is_zero() const {
  for (double v : table_) {
    if (v != 0.0) return false;
  }
  return true;
}

bool ProbabilityPotential::is_normal(double tolerance) const {
  return std::fabs(total() - 1.0) <= tolerance;
}

bool ProbabilityPotential::is_positive_normal(double tolerance) const {
  if (!is_normal(tolerance)) return false;
  for (double v : table_) {
    if (v <= 0.0) return false;
  }
  return true;
}

ProbabilityPotential ProbabilityPotential::normalized() const {
  const double t = total();
  if (t == 0.0) throw ModelError("cannot normalize a zero potential");
  std::vector<double> out(table_);
  for (double& v : out) v /= t;
  return ProbabilityPotential(model_, scope_, std::move(out));
}

ProbabilityPotential combine(const ProbabilityPotential& a,
                             const ProbabilityPotential& b) {
  detail::require_same_model(a.model_, b.model_);
  const VarSet u = a.scope_ | b.scope_;
  detail::count_combination(u.size());
  const ConfigIndexer idx(*a.model_, u);
  const IndexProjection pa(idx, ConfigIndexer(*a.model_, a.scope_));
  const IndexProjection pb(idx, ConfigIndexer(*a.model_, b.scope_));
  std::vector<double> out(idx.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = a.table_[pa(i)] * b.table_[pb(i)];
  return ProbabilityPotential(a.model_, u, std::move(out));
}

ProbabilityPotential marginalize(const ProbabilityPotential& a,
                                 const VarSet& target) {
  if (!target.subset_of(a.scope_))
    throw ModelError("marginalization target " + a.model_->render(target) +
                     " is not a subscope of " + a.model_->render(a.scope_));
  detail::count_marginalization();
  ProbabilityPotential out = a;
  for (VarId v : a.scope_ - target) out = delete_variable(out, v);
  return out;
}

ProbabilityPotential remove(const ProbabilityPotential& a,
                            const ProbabilityPotential& b) {
  detail::require_same_model(a.model_, b.model_);
  const VarSet u = a.scope_ | b.scope_;
  detail::count_removal(u.size());
  const ConfigIndexer idx(*a.model_, u);
  const IndexProjection pa(idx, ConfigIndexer(*a.model_, a.scope_));
  const IndexProjection pb(idx, ConfigIndexer(*a.model_, b.scope_));
  std::vector<double> out(idx.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = a.table_[pa(i)] * detail::pseudo_inverse(b.table_[pb(i)]);
  return ProbabilityPotential(a.model_, u, std::move(out));
}

ProbabilityPotential inverse(const ProbabilityPotential& a) {
  detail::count_removal(a.scope_.size());
  std::vector<double> out(a.table_.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = detail::pseudo_inverse(a.table_[i]);
  return ProbabilityPotential(a.model_, a.scope_, std::move(out));
}

}  // namespace vbs
