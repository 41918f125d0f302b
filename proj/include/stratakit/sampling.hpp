#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "stratakit/linalg.hpp"

namespace stratakit {

/// Mixes a base seed with a tag and an index (splitmix64 finalizer over an
/// FNV-1a hash of the tag). Used to give every scene point its own stream so
/// results do not depend on evaluation order.
std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, std::uint64_t index);

/// Deterministic random source. Uniform and normal variates are derived from
/// raw 64-bit outputs directly, so streams are identical across standard
/// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  int uniform_int(int lo, int hi_inclusive);
  double normal();
  Vec unit(int n);
  Vec in_box(const Vec& lo, const Vec& hi);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// `count` unit directions of R^n from a randomly shifted low-discrepancy
/// sequence: an equispaced angle lattice for n = 2, Halton points pushed
/// through Box-Muller for n >= 3, and {+1, -1} for n = 1.
std::vector<Vec> sphere_directions(int n, int count, std::uint64_t seed);

}  // namespace stratakit
