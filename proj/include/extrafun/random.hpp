#pragma once
// Seeded randomness for property checks. The seed defaults to a fixed
// constant so reports are reproducible; EXTRAFUN_SEED overrides it.

#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>

namespace extrafun {

inline std::uint64_t default_seed() {
  if (const char* s = std::getenv("EXTRAFUN_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end && end != s && *end == '\0') return static_cast<std::uint64_t>(v);
  }
  return 20260816ull;
}

class rng {
 public:
  rng() : gen_(default_seed()) {}
  explicit rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  long long uniform_int(long long lo, long long hi) {
    return std::uniform_int_distribution<long long>(lo, hi)(gen_);
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace extrafun
