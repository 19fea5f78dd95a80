#ifndef AVA_RNG_HPP
#define AVA_RNG_HPP

#include <cstdint>
#include <initializer_list>

namespace ava {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: every draw is a pure function of (seed, counter tuple),
/// so each (phase, item, bundle, ...) gets its own reproducible substream no matter
/// in which order draws are made or which thread makes them.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed) : seed_(seed) {}

  constexpr std::uint64_t seed() const { return seed_; }

  std::uint64_t bits(std::initializer_list<std::uint64_t> counter) const {
    std::uint64_t h = mix64(seed_ ^ 0x5851f42d4c957f2dULL);
    for (auto c : counter) h = mix64(h ^ mix64(c + 0x632be59bd9b4e019ULL));
    return h;
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform(std::initializer_list<std::uint64_t> counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p, std::initializer_list<std::uint64_t> counter) const {
    return uniform(counter) < p;
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n, std::initializer_list<std::uint64_t> counter) const {
    return static_cast<std::uint64_t>(uniform(counter) * static_cast<double>(n)) % n;
  }

  /// Independent child generator, e.g. one per Monte-Carlo trial.
  CounterRng derive(std::uint64_t index) const { return CounterRng(mix64(seed_ ^ mix64(index))); }

 private:
  std::uint64_t seed_;
};

/// Draw tags, one per independent use of the generator.
namespace stream {
inline constexpr std::uint64_t kUnambiguous = 1;
inline constexpr std::uint64_t kPhaseOne = 2;
inline constexpr std::uint64_t kPhaseTwo = 3;
inline constexpr std::uint64_t kArrival = 4;
inline constexpr std::uint64_t kGenerator = 5;
}  // namespace stream

}  // namespace ava

#endif  // AVA_RNG_HPP
