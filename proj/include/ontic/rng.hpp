#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace ontic {

namespace detail {
// SplitMix64, used only to derive keys and seed engines.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

// Deterministic, splittable random stream. The generator is mt19937_64 (the
// one engine whose output sequence the standard pins down), so streams are
// bit-reproducible across platforms. split() derives a child stream from the
// parent key and a split counter; it does not consume engine state, and
// successive splits from the same parent give independent children.
class Rng {
 public:
  explicit Rng(std::uint64_t seed)
      : key_(detail::splitmix64(seed ^ 0x7c15d1f0e5b9133fULL)),
        eng_(detail::splitmix64(key_)) {}

  Rng split() {
    ++splits_;
    return Rng(detail::splitmix64(key_ + 0x9e3779b97f4a7c15ULL * splits_));
  }

  std::uint64_t next_u64() { return eng_(); }

  // uniform on [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // uniform on (0, 1); safe for log()
  double uniform_open() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform_in(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // index in [0, n)
  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

  // standard normal via Box-Muller (std::normal_distribution is not
  // sequence-portable across standard libraries)
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::complex<double> gaussian_complex() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
  }

 private:
  std::uint64_t key_;
  std::uint64_t splits_ = 0;
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace ontic
