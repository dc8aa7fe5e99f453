#ifndef DGM_RNG_HPP
#define DGM_RNG_HPP

#include <cstdint>

namespace dgm {

/// SplitMix64: the portable seeded generator used for every randomized
/// suite, so corpora reproduce bit-for-bit across platforms and languages.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : s_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n) by modulo; fine for the small bounds used here.
  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

  long long int_in(long long lo, long long hi) {  // inclusive
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  /// Derive an independent stream (for per-trial replayable seeds).
  std::uint64_t fork_seed() { return next(); }

 private:
  std::uint64_t s_;
};

}  // namespace dgm

#endif
