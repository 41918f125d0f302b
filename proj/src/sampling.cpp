#include "stratakit/sampling.hpp"

#include <cmath>
#include <numbers>

#include "stratakit/errors.hpp"

namespace stratakit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double radical_inverse(std::uint64_t index, std::uint64_t base) {
  double result = 0.0;
  double f = 1.0 / static_cast<double>(base);
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= static_cast<double>(base);
  }
  return result;
}

constexpr std::uint64_t kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, std::uint64_t index) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(base ^ h) + index);
}

int Rng::uniform_int(int lo, int hi_inclusive) {
  const auto span = static_cast<std::uint64_t>(hi_inclusive - lo) + 1;
  return lo + static_cast<int>(engine_() % span);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

Vec Rng::unit(int n) {
  for (;;) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    const double len = norm(v);
    if (len > 1e-12) return v / len;
  }
}

Vec Rng::in_box(const Vec& lo, const Vec& hi) {
  Vec v(lo.dim());
  for (int i = 0; i < lo.dim(); ++i) v[i] = uniform(lo[i], hi[i]);
  return v;
}

std::vector<Vec> sphere_directions(int n, int count, std::uint64_t seed) {
  if (n < 1 || n > kMaxDim) throw InvalidInput("sphere_directions: bad dimension");
  if (count < 1) throw InvalidInput("sphere_directions: count must be positive");
  std::vector<Vec> dirs;
  dirs.reserve(static_cast<std::size_t>(count));
  Rng rng(seed);
  if (n == 1) {
    for (int k = 0; k < count; ++k) dirs.push_back(Vec{k % 2 == 0 ? 1.0 : -1.0});
    return dirs;
  }
  if (n == 2) {
    const double shift = rng.uniform01();
    for (int k = 0; k < count; ++k) {
      const double angle = 2.0 * std::numbers::pi * (k + shift) / count;
      dirs.push_back(Vec{std::cos(angle), std::sin(angle)});
    }
    return dirs;
  }
  const int pairs = (n + 1) / 2;
  std::vector<double> shift(static_cast<std::size_t>(2 * pairs));
  for (double& s : shift) s = rng.uniform01();
  for (int k = 0; k < count; ++k) {
    Vec v(n);
    for (int p = 0; p < pairs; ++p) {
      double u1 = std::fmod(radical_inverse(k + 1, kPrimes[2 * p]) + shift[2 * p], 1.0);
      const double u2 = std::fmod(radical_inverse(k + 1, kPrimes[2 * p + 1]) + shift[2 * p + 1], 1.0);
      if (u1 <= 0.0) u1 = 0x1.0p-53;
      const double r = std::sqrt(-2.0 * std::log(u1));
      v[2 * p] = r * std::cos(2.0 * std::numbers::pi * u2);
      if (2 * p + 1 < n) v[2 * p + 1] = r * std::sin(2.0 * std::numbers::pi * u2);
    }
    const double len = norm(v);
    dirs.push_back(len > 0.0 ? v / len : unit_vector(n, 0));
  }
  return dirs;
}

}  // namespace stratakit
