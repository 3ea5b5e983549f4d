#pragma once

#include <array>
#include <cstdint>

namespace mop::sampling {

// Philox4x32-10 counter-based generator (Salmon et al. 2011).
using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxBlock philox4x32_10(PhiloxBlock counter, PhiloxKey key) noexcept;

// Sequential draws from the substream `stream` of generator `seed`. The
// counter is (stream lo, stream hi, block lo, block hi), so streams never
// overlap and each one is independent of how work is scheduled.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint32_t next_u32() noexcept;
  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  // Standard normal by the Marsaglia polar method.
  double normal() noexcept;

 private:
  PhiloxKey key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  PhiloxBlock buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mop::sampling
