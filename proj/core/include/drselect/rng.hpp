#pragma once

#include <cmath>
#include <cstdint>

namespace drselect {

// Philox 2x64 counter-based generator (Salmon et al., SC'11), 10 rounds.
//
// A stream is addressed by (key, stream): `key` is the user-level run seed
// and `stream` selects an independent substream. The 128-bit counter is
// (block index, stream id), so streams never collide and any draw is a pure
// function of (key, stream, position). Simulation replicate k owns stream
// block k << kStreamShift with small channel offsets for its internal
// consumers (data generation, CV fold shuffles, bootstrap resamples), which
// makes multi-worker runs reproduce the single-threaded sequence exactly.
class Philox {
public:
  Philox(std::uint64_t key, std::uint64_t stream)
      : key_(key), stream_(stream) {}

  std::uint64_t next_u64() {
    if (have_ == 0) {
      block(counter_++, out_);
      have_ = 2;
    }
    return out_[2 - have_--];
  }

  // Uniform on the open interval (0,1).
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; one pair per two calls.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = next_uniform();
    double u2 = next_uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  int next_bernoulli(double p) { return next_uniform() < p ? 1 : 0; }

  // Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Stateless keyed hash: one Philox block of `value` under (key, stream).
  static std::uint64_t hash64(std::uint64_t key, std::uint64_t stream,
                              std::uint64_t value) {
    std::uint64_t out[2];
    Philox(key, stream).block(value, out);
    return out[0];
  }

private:
  static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                      std::uint64_t& lo) {
    unsigned __int128 prod =
        static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
    hi = static_cast<std::uint64_t>(prod >> 64);
    lo = static_cast<std::uint64_t>(prod);
  }

  void block(std::uint64_t ctr, std::uint64_t out[2]) const {
    constexpr std::uint64_t kMul = 0xD2B74407B1CE6E93ULL;
    constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ULL;
    std::uint64_t x0 = ctr, x1 = stream_, k = key_;
    for (int round = 0; round < 10; ++round) {
      std::uint64_t hi, lo;
      mulhilo(kMul, x0, hi, lo);
      x0 = hi ^ k ^ x1;
      x1 = lo;
      k += kWeyl;
    }
    out[0] = x0;
    out[1] = x1;
  }

  std::uint64_t key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::uint64_t out_[2] = {0, 0};
  int have_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stream-id layout shared by the simulation harness and the estimators.
namespace streams {
constexpr int kStreamShift = 20;  // replicate index occupies the high bits
constexpr std::uint64_t kDgp = 0;
constexpr std::uint64_t kFoldsTreated = 1;
constexpr std::uint64_t kFoldsControl = 2;
constexpr std::uint64_t kFoldsPs = 3;
constexpr std::uint64_t kAceOracle = 4;
constexpr std::uint64_t kBootstrapBase = 16;  // resample b uses channel 16+b

inline std::uint64_t replicate_base(std::uint64_t replicate) {
  return replicate << kStreamShift;
}
}  // namespace streams

}  // namespace drselect
