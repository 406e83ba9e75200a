#include "phc/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>

namespace phc {

int worker_count() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PHC_LAB_THREADS")) {
    try {
      const int requested = std::stoi(env);
      if (requested >= 1) return std::min(requested, static_cast<int>(hw));
    } catch (const std::exception&) {
      // ignore malformed values
    }
  }
  return static_cast<int>(hw);
}

}  // namespace phc
