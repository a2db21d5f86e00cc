#include "densitop/parallel.hpp"

#include <cstdlib>
#include <string>

namespace densitop {

int threads_from_env() {
  const char* raw = std::getenv("DENSITOP_THREADS");
  if (raw == nullptr) return 1;
  try {
    const int n = std::stoi(raw);
    return n >= 1 ? n : 1;
  } catch (const std::exception&) {
    return 1;
  }
}

}  // namespace densitop
