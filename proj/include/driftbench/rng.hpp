#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace driftbench {

/// FNV-1a hash of a label, used to derive independent seed streams.
std::uint64_t fnv1a64(std::string_view s);

/// Child seed for a named purpose: master ^ fnv1a64(purpose).
/// Streams for distinct purposes are independent yet reproducible.
std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose);

/// Deterministic random source. The generator is std::mt19937_64, whose
/// output sequence is fixed by the C++ standard, so identical seeds give
/// bit-identical draws on every platform. Standard-normal variates use
/// the Box-Muller transform (not std::normal_distribution, whose stream
/// is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; caches the paired variate.
  double normal();

  /// Unbiased integer in [0, n), by rejection.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace driftbench
