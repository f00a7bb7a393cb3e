#include "belllab/random.hpp"

#include <stdexcept>

namespace belllab {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
constexpr int kRounds = 10;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = std::uint64_t{a} * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

}  // namespace

std::array<std::uint32_t, 4> CounterRng::block(std::array<std::uint32_t, 4> c,
                                               std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < kRounds; ++round) {
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

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      counter_{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

void CounterRng::refill() {
  buffer_ = block(counter_, key_);
  buffered_ = 4;
  if (++counter_[0] == 0) ++counter_[1];
}

CounterRng::result_type CounterRng::operator()() {
  if (buffered_ < 2) refill();
  const std::uint64_t lo = buffer_[4 - buffered_];
  const std::uint64_t hi = buffer_[5 - buffered_];
  buffered_ -= 2;
  return (hi << 32) | lo;
}

double CounterRng::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

std::uint64_t CounterRng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("bound must be positive");
  // Reject the final partial copy of [0, bound) so every residue is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t x = (*this)();
    if (x >= threshold) return x % bound;
  }
}

}  // namespace belllab
