#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qns {

//! splitmix64 finalizer; used to decorrelate derived seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

//! Stable sub-seed for a named component (FNV-1a over the name).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view component)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : component) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return mix_seed(seed ^ mix_seed(h));
}

//! Stable sub-seed for an indexed work item (probe, chunk).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index)
{
    return mix_seed(seed ^ mix_seed(index + 0x632be59bd9b4e019ULL));
}

//! Deterministic stream of uniform doubles in [0, 1).
class UniformStream {
  public:
    explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace qns
