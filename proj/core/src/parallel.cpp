#include "belllab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace belllab {

unsigned resolve_threads(unsigned requested) {
  unsigned cap = 0;
  if (const char* env = std::getenv("BELLLAB_THREADS"); env && *env) {
    try {
      const long v = std::stol(env);
      if (v > 0) cap = static_cast<unsigned>(v);
    } catch (const std::exception&) {
      // Ignored: an unparsable value leaves the default in place.
    }
  }
  unsigned n = requested;
  if (n == 0) n = cap ? cap : std::max(1u, std::thread::hardware_concurrency());
  if (cap && n > cap) n = cap;
  return n;
}

}  // namespace belllab
