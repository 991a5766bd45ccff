#include "qmix/numeric_policy.hpp"

namespace qmix {
namespace {
NumericPolicy& mutable_policy() noexcept {
  static NumericPolicy policy;
  return policy;
}
}  // namespace

const NumericPolicy& numeric_policy() noexcept { return mutable_policy(); }

void set_numeric_policy(const NumericPolicy& policy) noexcept { mutable_policy() = policy; }

}  // namespace qmix
