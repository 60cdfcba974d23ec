#include "vbs/types.hpp"

#include <algorithm>

namespace vbs {

VarSet::VarSet(std::initializer_list<VarId> ids) {
  ids_.assign(ids.begin(), ids.end());
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

VarSet VarSet::from_unsorted(std::vector<VarId> ids) {
  VarSet s;
  s.ids_ = std::move(ids);
  std::sort(s.ids_.begin(), s.ids_.end());
  s.ids_.erase(std::unique(s.ids_.begin(), s.ids_.end()), s.ids_.end());
  return s;
}

bool VarSet::contains(VarId v) const {
  return std::binary_search(ids_.begin(), ids_.end(), v);
}

bool VarSet::subset_of(const VarSet& other) const {
  return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(),
                       ids_.end());
}

VarSet VarSet::without(VarId v) const {
  VarSet out;
  out.ids_.reserve(ids_.size());
  for (VarId x : ids_) {
    if (x != v) out.ids_.push_back(x);
  }
  return out;
}

VarSet operator|(const VarSet& a, const VarSet& b) {
  VarSet out;
  out.ids_.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out.ids_));
  return out;
}

VarSet operator&(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out.ids_));
  return out;
}

VarSet operator-(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out.ids_));
  return out;
}

VarId Model::add_variable(std::string name, std::vector<std::string> frame) {
  if (name.empty()) throw ModelError("variable name must be non-empty");
  if (frame.empty())
    throw ModelError("variable '" + name + "' needs a non-empty frame");
  for (std::size_t i = 0; i < frame.size(); ++i) {
    for (std::size_t j = i + 1; j < frame.size(); ++j) {
      if (frame[i] == frame[j])
        throw ModelError("variable '" + name + "' has duplicate frame value '" +
                         frame[i] + "'");
    }
  }
  if (find(name))
    throw ModelError("duplicate variable name '" + name + "'");
  VarId id = static_cast<VarId>(vars_.size());
  vars_.push_back(Variable{id, std::move(name), std::move(frame)});
  return id;
}

const Variable& Model::var(VarId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= vars_.size())
    throw ModelError("variable id " + std::to_string(id) + " out of range");
  return vars_[static_cast<std::size_t>(id)];
}

std::optional<VarId> Model::find(std::string_view name) const {
  for (const Variable& v : vars_) {
    if (v.name == name) return v.id;
  }
  return std::nullopt;
}

VarSet Model::all_vars() const {
  std::vector<VarId> ids(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) ids[i] = vars_[i].id;
  return VarSet::from_unsorted(std::move(ids));
}

std::string Model::render(const VarSet& s) const {
  std::string out = "{";
  bool first = true;
  for (VarId v : s) {
    if (!first) out += ", ";
    first = false;
    out += var(v).name;
  }
  out += "}";
  return out;
}

Configuration Configuration::project(const VarSet& r) const {
  if (!r.subset_of(scope))
    throw ModelError("configuration projection target is not a subscope");
  Configuration out;
  out.scope = r;
  out.values.reserve(r.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < scope.size(); ++i) {
    if (j < r.size() && scope[i] == r[j]) {
      out.values.push_back(values[i]);
      ++j;
    }
  }
  return out;
}

int Configuration::value_of(VarId v) const {
  for (std::size_t i = 0; i < scope.size(); ++i) {
    if (scope[i] == v) return values[i];
  }
  throw ModelError("variable not present in configuration scope");
}

}  // namespace vbs
