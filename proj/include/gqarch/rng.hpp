#pragma once

#include <cstdint>
#include <random>

namespace gqarch {

/// Packs a (cell, replication) pair into a single stream identifier.
constexpr std::uint64_t stream_id(std::uint32_t cell, std::uint32_t replication) noexcept {
  return (static_cast<std::uint64_t>(cell) << 32) | replication;
}

/// Deterministic random stream keyed by (seed, stream). Two streams with
/// different keys are seeded independently, so replications can be drawn in
/// any order or on any worker without changing their values.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  double uniform();  // [0, 1)
  double normal();
  double student_t(double nu);
  double rademacher();
  std::uint64_t next_u64() { return engine_(); }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Derives a child seed from (seed, tag); used for optimizer sub-seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept;

}  // namespace gqarch
