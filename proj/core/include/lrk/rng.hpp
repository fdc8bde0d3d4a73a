#pragma once

#include <array>
#include <cstdint>

namespace lrk {

/// Philox4x32-10 counter-based block cipher.
/// Stateless: the output is a pure function of (counter, key).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key) noexcept;
};

/// Tags that keep the random streams of different subsystems disjoint
/// even when they share a user seed.
enum class StreamDomain : std::uint64_t {
  field_modes = 1,
  levy_paths = 2,
  potential_ensemble = 3,
  generic = 4,
};

/// Deterministic random stream identified by (seed, domain, stream id).
///
/// Two generators with equal identifiers produce identical sequences no
/// matter which thread owns them, which is what makes every stochastic
/// entry point reproducible across worker counts.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream,
             StreamDomain domain = StreamDomain::generic) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0, 1].
  double uniform_open() noexcept;
  double normal() noexcept;
  double exponential() noexcept;

 private:
  void refill() noexcept;

  Philox4x32::Key key_{};
  std::uint64_t stream_ = 0;
  std::uint64_t block_ = 0;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finalizer; used to derive keys and sub-stream identifiers.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace lrk
