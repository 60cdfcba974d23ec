#include "vbs/algebra.hpp"

namespace vbs {

OpCounts& op_counts() {
  thread_local OpCounts counts;
  return counts;
}

}  // namespace vbs
