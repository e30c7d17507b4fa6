#include "weylscope/rng.hpp"

#include <cmath>

namespace weylscope {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::Stream CounterRng::stream(std::uint64_t index) const {
  return Stream(mix64(seed_ ^ mix64(index ^ 0x6a09e667f3bcc909ULL)));
}

std::uint64_t CounterRng::Stream::next_u64() { return mix64(key_ + mix64(counter_++)); }

double CounterRng::Stream::uniform() {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::Stream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = uniform(), v = uniform();
  double r = std::sqrt(-2.0 * std::log(u));
  spare_ = r * std::sin(2.0 * M_PI * v);
  has_spare_ = true;
  return r * std::cos(2.0 * M_PI * v);
}

}  // namespace weylscope
