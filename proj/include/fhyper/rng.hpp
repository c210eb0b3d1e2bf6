#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace fhyper {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
/// easy as 1, 2, 3"). Output depends only on (counter, key).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;
  static constexpr const char *algorithm_id = "philox4x32-10";

  static Counter block(Counter counter, Key key);
};

/// Deterministic stream of variates addressed by (seed, stream). Two streams
/// with the same address produce identical sequences on every platform; the
/// normal variates use Box-Muller so they do not depend on the standard
/// library's distribution implementations.
class CounterStream {
public:
  CounterStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double gaussian();

private:
  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Mix a master seed with a path of indices (splitmix64 finalizer per step).
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

} // namespace fhyper
