#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vbs/types.hpp"

namespace vbs {

// Dense table addressing for the configuration space of a scope.
// Configurations are ordered lexicographically with the last variable of the
// scope varying fastest, so strides shrink from front to back.
class ConfigIndexer {
public:
  ConfigIndexer(const Model& model, const VarSet& scope);

  const VarSet& scope() const { return scope_; }
  std::size_t size() const { return size_; }
  std::size_t arity() const { return radix_.size(); }

  std::size_t index_of(std::span<const int> digits) const;
  std::vector<int> decode(std::size_t index) const;
  void decode_into(std::size_t index, std::span<int> out) const;

  /// Frame-value index of the variable at scope position pos.
  int digit(std::size_t index, std::size_t pos) const {
    return static_cast<int>(index / stride_[pos] % radix_[pos]);
  }

  std::size_t radix(std::size_t pos) const { return radix_[pos]; }
  std::size_t stride(std::size_t pos) const { return stride_[pos]; }

  Configuration configuration(std::size_t index) const;

private:
  VarSet scope_;
  std::vector<std::size_t> radix_;
  std::vector<std::size_t> stride_;
  std::size_t size_ = 1;
};

// Maps a configuration index over a scope to the index of its projection
// onto a subscope. Built once, applied per table entry.
class IndexProjection {
public:
  IndexProjection(const ConfigIndexer& from, const ConfigIndexer& onto);

  std::size_t operator()(std::size_t index) const {
    std::size_t out = 0;
    for (const Term& t : terms_) out += index / t.stride_in % t.radix * t.stride_out;
    return out;
  }

private:
  struct Term {
    std::size_t stride_in;
    std::size_t radix;
    std::size_t stride_out;
  };
  std::vector<Term> terms_;
};

}  // namespace vbs
