#include "swflow/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace swflow {

namespace {
std::atomic<std::size_t> g_default_threads{0};
}

std::size_t resolve_threads(std::optional<std::size_t> requested) {
  if (requested && *requested > 0) return *requested;
  if (const char* env = std::getenv("SWFLOW_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::size_t default_threads() {
  const std::size_t v = g_default_threads.load();
  return v == 0 ? resolve_threads() : v;
}

void set_default_threads(std::size_t count) { g_default_threads.store(count); }

}  // namespace swflow
