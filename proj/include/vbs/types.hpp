#pragma once

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vbs {

using VarId = std::int32_t;

// ---------------------------------------------------------------------------
// Errors. The CLI maps these onto exit codes: input errors -> 2,
// capability errors -> 3, invariant/scheduling errors -> 4.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed model, scope violation, unknown name.
class ModelError : public Error {
public:
  using Error::Error;
};

/// Parse failure with source position.
class ParseError : public ModelError {
public:
  ParseError(std::string message, int line, int column)
      : ModelError(std::move(message)), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

/// Operation requested on an instance that does not support it.
class CapabilityError : public Error {
public:
  using Error::Error;
};

/// Message requested before its prerequisites were computed.
class SchedulingError : public Error {
public:
  using Error::Error;
};

/// A structural invariant failed to hold.
class InvariantError : public Error {
public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// VarSet: a canonical ordered set of variable ids.
// ---------------------------------------------------------------------------

class VarSet {
public:
  VarSet() = default;
  VarSet(std::initializer_list<VarId> ids);
  static VarSet from_unsorted(std::vector<VarId> ids);

  bool contains(VarId v) const;
  bool subset_of(const VarSet& other) const;

  VarSet without(VarId v) const;

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }
  VarId operator[](std::size_t i) const { return ids_[i]; }
  const std::vector<VarId>& ids() const { return ids_; }

  friend VarSet operator|(const VarSet& a, const VarSet& b);
  friend VarSet operator&(const VarSet& a, const VarSet& b);
  friend VarSet operator-(const VarSet& a, const VarSet& b);

  bool operator==(const VarSet&) const = default;

private:
  std::vector<VarId> ids_;  // strictly ascending
};

// ---------------------------------------------------------------------------
// Model: the variable table. Valuations keep a shared handle to the model
// they were built against; operations require operands from the same model.
// ---------------------------------------------------------------------------

struct Variable {
  VarId id;
  std::string name;
  std::vector<std::string> frame;  // distinct value labels, size >= 1
};

class Model {
public:
  VarId add_variable(std::string name, std::vector<std::string> frame);

  std::size_t size() const { return vars_.size(); }
  const Variable& var(VarId id) const;
  std::size_t frame_size(VarId id) const { return var(id).frame.size(); }
  std::optional<VarId> find(std::string_view name) const;
  VarSet all_vars() const;

  std::string render(const VarSet& s) const;  // "{A, B}" for diagnostics

private:
  std::vector<Variable> vars_;
};

using ModelPtr = std::shared_ptr<const Model>;

// ---------------------------------------------------------------------------
// Configuration: an assignment of frame-value indices to a scope.
// ---------------------------------------------------------------------------

struct Configuration {
  VarSet scope;
  std::vector<int> values;  // parallel to scope

  /// Drop exactly the variables outside r (r must be a subset of scope).
  Configuration project(const VarSet& r) const;
  int value_of(VarId v) const;
};

}  // namespace vbs
