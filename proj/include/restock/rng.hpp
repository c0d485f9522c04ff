#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace restock {

// Deterministic random source. std::mt19937_64 gives a portable bit stream;
// the float mapping is pinned here instead of using std::uniform_real_distribution,
// whose output is implementation defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  // uniform in [0, 1)
  double u01() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : bits() % n; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

// SplitMix64 finalizer, used to derive decorrelated substream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ mix64(stream + 1));
}

inline Rng substream(std::uint64_t seed, std::uint64_t stream) {
  return Rng(substream_seed(seed, stream));
}

}  // namespace restock
