#pragma once

#include <cstdint>
#include <random>

namespace wbs2 {

/// Seedable pseudo-random source. Identical seeds give identical draw
/// sequences for a given build.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform integer on the closed range [a, b].
    std::uint64_t uniform_int(std::uint64_t a, std::uint64_t b) {
        return std::uniform_int_distribution<std::uint64_t>(a, b)(engine_);
    }
    double normal() { return normal_(engine_); }
    double student_t(double df) { return std::student_t_distribution<double>(df)(engine_); }
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Independent stream seed for replicate `index` of a run seeded with `seed`.
/// Parallel and serial execution derive identical per-replicate streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace wbs2
