#pragma once

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

namespace mmnet::test {

/// Seed for property tests: MMNET_TEST_SEED when set, else a fixed default.
inline std::uint64_t seed() {
  static const std::uint64_t value = [] {
    const char* env = std::getenv("MMNET_TEST_SEED");
    return env && *env ? std::stoull(env) : std::uint64_t{20261018};
  }();
  return value;
}

inline void announce_seed() { std::cout << "MMNET_TEST_SEED=" << seed() << std::endl; }

}  // namespace mmnet::test
