#pragma once

#include <cstdint>

namespace weylscope {

// Counter-based generator: draw k of stream i is a pure function of
// (seed, i, k), so parallel and serial runs produce identical samples.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  class Stream {
   public:
    explicit Stream(std::uint64_t key) : key_(key) {}
    std::uint64_t next_u64();
    double uniform();  // in (0, 1)
    double normal();

   private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
  };

  Stream stream(std::uint64_t index) const;
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

}  // namespace weylscope
