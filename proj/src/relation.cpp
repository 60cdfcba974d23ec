#include "vbs/relation.hpp"

namespace vbs {

namespace {

BooleanRelation delete_variable(const BooleanRelation& a, VarId v) {
  const VarSet target = a.scope().without(v);
  const ConfigIndexer from(*a.model(), a.scope());
  const ConfigIndexer onto(*a.model(), target);
  const IndexProjection proj(from, onto);
  std::vector<std::uint8_t> out(onto.size(), 0);
  for (std::size_t i = 0; i < from.size(); ++i) {
    if (a.rows()[i]) out[proj(i)] = 1;
  }
  return BooleanRelation(a.model(), target, std::move(out));
}

}  // namespace

BooleanRelation::BooleanRelation(ModelPtr model, VarSet scope,
                                 std::vector<std::uint8_t> rows)
    : model_(std::move(model)), scope_(std::move(scope)), rows_(std::move(rows)) {
  if (!model_) throw ModelError("relation needs a model");
  const ConfigIndexer idx(*model_, scope_);
  if (rows_.size() != idx.size())
    throw ModelError("relation has " + std::to_string(rows_.size()) +
                     " rows, scope " + model_->render(scope_) + " needs " +
                     std::to_string(idx.size()));
  for (std::uint8_t r : rows_) {
    if (r > 1) throw ModelError("relation rows must be 0 or 1");
  }
}

BooleanRelation BooleanRelation::identity(const ModelPtr& model,
                                          const VarSet& scope) {
  const ConfigIndexer idx(*model, scope);
  return BooleanRelation(model, scope, std::vector<std::uint8_t>(idx.size(), 1));
}

BooleanRelation BooleanRelation::zero(const ModelPtr& model,
                                      const VarSet& scope) {
  const ConfigIndexer idx(*model, scope);
  return BooleanRelation(model, scope, std::vector<std::uint8_t>(idx.size(), 0));
}

bool BooleanRelation::is_zero() const {
  for (std::uint8_t r : rows_) {
    if (r) return false;
  }
  return true;
}

bool BooleanRelation::is_normal(double) const { return !is_zero(); }

BooleanRelation combine(const BooleanRelation& a, const BooleanRelation& b) {
  detail::require_same_model(a.model_, b.model_);
  const VarSet u = a.scope_ | b.scope_;
  detail::count_combination(u.size());
  const ConfigIndexer idx(*a.model_, u);
  const IndexProjection pa(idx, ConfigIndexer(*a.model_, a.scope_));
  const IndexProjection pb(idx, ConfigIndexer(*a.model_, b.scope_));
  std::vector<std::uint8_t> out(idx.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<std::uint8_t>(a.rows_[pa(i)] & b.rows_[pb(i)]);
  return BooleanRelation(a.model_, u, std::move(out));
}

BooleanRelation marginalize(const BooleanRelation& a, const VarSet& target) {
  if (!target.subset_of(a.scope_))
    throw ModelError("marginalization target " + a.model_->render(target) +
                     " is not a subscope of " + a.model_->render(a.scope_));
  detail::count_marginalization();
  BooleanRelation out = a;
  for (VarId v : a.scope_ - target) out = delete_variable(out, v);
  return out;
}

}  // namespace vbs
