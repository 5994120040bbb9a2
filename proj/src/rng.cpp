#include "thematic/rng.hpp"

#include <sstream>

#include "thematic/error.hpp"

namespace thematic {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(seed + stream * 0x9E3779B97F4A7C15ULL)) {}

std::string Rng::state() const {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << engine_;
  return os.str();
}

Rng Rng::from_state(const std::string& state) {
  Rng r;
  std::istringstream is(state);
  is.imbue(std::locale::classic());
  is >> r.engine_;
  if (is.fail()) throw DataError("corrupt RNG state");
  return r;
}

}  // namespace thematic
