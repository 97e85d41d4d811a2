#ifndef GABP_RNG_HPP
#define GABP_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace gabp {

using Rng = std::mt19937_64;

// Named substreams. Every random draw in the library flows from one master
// seed through one of these.
namespace stream {
inline constexpr std::string_view kPopulationInit = "population-init";
inline constexpr std::string_view kOperators = "operators";
inline constexpr std::string_view kDataGen = "data-gen";
inline constexpr std::string_view kBpInit = "bp-init";
}  // namespace stream

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t master, std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(master ^ splitmix64(h));
}

inline Rng make_substream(std::uint64_t master, std::string_view name) {
  return Rng{substream_seed(master, name)};
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace gabp

#endif  // GABP_RNG_HPP
