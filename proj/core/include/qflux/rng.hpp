#pragma once

#include <cstdint>
#include <vector>

namespace qflux {

// Counter-based generator: output n is a pure function of (seed, n), so the
// same seed reproduces the same draw bit-exactly on every platform, and
// independent streams are derived by hashing a stream id into the seed.
// The mixing function is the splitmix64 finalizer.
class CounterRng {
  public:
    explicit CounterRng(uint64_t seed) : seed_(seed) {}

    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    uint64_t next_u64() { return mix(seed_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

    // Uniform in [0, 1) with 53 significant bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Independent substream for parallel use.
    CounterRng split(uint64_t stream) const { return CounterRng(mix(seed_ ^ mix(stream + 1))); }

  private:
    uint64_t seed_;
    uint64_t counter_ = 0;
};

// `shots` multinomial draws over `weights` (need not be normalized), returned
// as counts per category. Inverse-CDF with binary search per draw.
std::vector<uint64_t> multinomial_counts(const std::vector<double> &weights, uint64_t shots,
                                         CounterRng &rng);

} // namespace qflux
