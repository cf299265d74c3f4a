#include <atomic>
#include <cstdlib>
#include <string_view>

#include "gapvi/kernels.hpp"

namespace gapvi::kernels {
namespace {

const KernelTable* pick_default() {
  const KernelTable* fast = (avx2_table() != nullptr && cpu_supports_avx2()) ? avx2_table() : nullptr;
  if (const char* env = std::getenv("GAPVI_KERNELS")) {
    const std::string_view want(env);
    if (want == "scalar") return &scalar_table();
    if (want == "avx2" && fast != nullptr) return fast;
  }
  return fast != nullptr ? fast : &scalar_table();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> table{pick_default()};
  return table;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

bool select(std::string_view name) {
  if (name == "scalar") {
    slot().store(&scalar_table(), std::memory_order_release);
    return true;
  }
  if (name == "avx2" && avx2_table() != nullptr && cpu_supports_avx2()) {
    slot().store(avx2_table(), std::memory_order_release);
    return true;
  }
  return false;
}

}  // namespace gapvi::kernels
