#include "smbcs/rng.hpp"

#include <cmath>
#include <numbers>

#include "smbcs/errors.hpp"

namespace smbcs {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> c,
                                           std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kWeyl0;
      k[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::uint64_t derive_key(std::uint64_t master_seed, std::string_view tag) {
  return splitmix64(master_seed ^ fnv1a64(tag));
}

Philox::Philox(std::uint64_t key, std::uint64_t stream_id)
    : key_(key), stream_(stream_id) {}

Philox Philox::for_stream(std::uint64_t master_seed, std::string_view tag,
                          std::uint64_t index) {
  return Philox(derive_key(master_seed, tag), index);
}

void Philox::refill() {
  // Counter layout (little-endian words): block index in words 0-1, stream id
  // in words 2-3.
  const std::array<std::uint32_t, 4> counter = {
      static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
      static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(key_),
                                            static_cast<std::uint32_t>(key_ >> 32)};
  buffer_ = philox4x32_10(counter, key);
  ++block_;
  next_ = 0;
}

Philox::result_type Philox::operator()() {
  if (next_ >= 4) refill();
  const std::uint64_t lo = buffer_[next_];
  const std::uint64_t hi = buffer_[next_ + 1];
  next_ += 2;
  return lo | (hi << 32);
}

double uniform01(Philox& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform_open_closed(Philox& rng) { return 1.0 - uniform01(rng); }

std::uint64_t uniform_index(Philox& rng, std::uint64_t n) {
  if (n == 0) throw DomainError("uniform_index: empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  for (;;) {
    const std::uint64_t x = rng();
    if (x < limit) return x % n;
  }
}

std::pair<double, double> standard_normal_pair(Philox& rng) {
  const double u1 = uniform_open_closed(rng);
  const double u2 = uniform01(rng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

std::uint64_t geometric(Philox& rng, double q) {
  if (!(q >= 0.0 && q < 1.0)) throw DomainError("geometric: ratio must lie in [0, 1)");
  const double u = uniform_open_closed(rng);
  if (q == 0.0) return 0;
  return static_cast<std::uint64_t>(std::floor(std::log(u) / std::log(q)));
}

}  // namespace smbcs
