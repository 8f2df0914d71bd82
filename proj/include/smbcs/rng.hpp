#pragma once

// Counter-based random streams.
//
// Every random number in the simulator comes from Philox4x32-10 (Salmon et
// al., Random123). A stream is identified by a 64-bit key and a 64-bit stream
// id; the remaining 64 counter bits index 128-bit output blocks. Keys are
// derived from the master seed and a textual tag (see derive_key), stream ids
// are the trial / sample index. Distributions are implemented here, not taken
// from <random>, so that streams are reproducible across standard libraries.

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>
#include <utility>

namespace smbcs {

inline constexpr std::string_view kGeneratorName = "philox4x32-10";

/// The 10-round Philox4x32 bijection applied to one counter block.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// FNV-1a 64-bit hash of a byte string.
std::uint64_t fnv1a64(std::string_view bytes);

/// Key for a named sub-stream family: splitmix64(master ^ fnv1a64(tag)).
std::uint64_t derive_key(std::uint64_t master_seed, std::string_view tag);

class Philox {
 public:
  using result_type = std::uint64_t;

  Philox(std::uint64_t key, std::uint64_t stream_id = 0);

  /// Stream `index` of family `tag` under `master_seed`.
  static Philox for_stream(std::uint64_t master_seed, std::string_view tag,
                           std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  std::uint64_t key() const { return key_; }
  std::uint64_t stream_id() const { return stream_; }

 private:
  void refill();

  std::uint64_t key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int next_ = 4;
};

/// Uniform on [0, 1) with 53 random bits.
double uniform01(Philox& rng);

/// Uniform on (0, 1].
double uniform_open_closed(Philox& rng);

/// Uniform integer on [0, n). Requires n > 0. Uses rejection, so unbiased.
std::uint64_t uniform_index(Philox& rng, std::uint64_t n);

/// Two independent standard normals (Box-Muller).
std::pair<double, double> standard_normal_pair(Philox& rng);

/// P(n) = (1 - q) q^n for n = 0, 1, ...; q in [0, 1). Inversion sampling.
std::uint64_t geometric(Philox& rng, double q);

}  // namespace smbcs
