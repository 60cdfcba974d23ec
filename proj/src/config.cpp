#include "vbs/config.hpp"

#include <limits>

namespace vbs {

ConfigIndexer::ConfigIndexer(const Model& model, const VarSet& scope)
    : scope_(scope) {
  const std::size_t n = scope.size();
  radix_.resize(n);
  stride_.resize(n);
  for (std::size_t i = 0; i < n; ++i) radix_[i] = model.frame_size(scope[i]);
  std::size_t acc = 1;
  for (std::size_t i = n; i-- > 0;) {
    stride_[i] = acc;
    if (radix_[i] != 0 && acc > std::numeric_limits<std::size_t>::max() / radix_[i])
      throw ModelError("configuration space too large to index");
    acc *= radix_[i];
  }
  size_ = acc;
}

std::size_t ConfigIndexer::index_of(std::span<const int> digits) const {
  if (digits.size() != radix_.size())
    throw ModelError("configuration arity does not match scope");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] < 0 || static_cast<std::size_t>(digits[i]) >= radix_[i])
      throw ModelError("configuration value index out of frame range");
    idx += static_cast<std::size_t>(digits[i]) * stride_[i];
  }
  return idx;
}

std::vector<int> ConfigIndexer::decode(std::size_t index) const {
  std::vector<int> out(radix_.size());
  decode_into(index, out);
  return out;
}

void ConfigIndexer::decode_into(std::size_t index, std::span<int> out) const {
  for (std::size_t i = 0; i < radix_.size(); ++i) out[i] = digit(index, i);
}

Configuration ConfigIndexer::configuration(std::size_t index) const {
  return Configuration{scope_, decode(index)};
}

IndexProjection::IndexProjection(const ConfigIndexer& from,
                                 const ConfigIndexer& onto) {
  if (!onto.scope().subset_of(from.scope()))
    throw ModelError("projection target is not a subscope");
  terms_.reserve(onto.arity());
  std::size_t j = 0;
  for (std::size_t i = 0; i < from.arity() && j < onto.arity(); ++i) {
    if (from.scope()[i] != onto.scope()[j]) continue;
    terms_.push_back(Term{from.stride(i), from.radix(i), onto.stride(j)});
    ++j;
  }
}

}  // namespace vbs
