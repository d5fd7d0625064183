#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace nbmeans {

/// Seeded random stream with portable variate generators.
///
/// Only the raw 64-bit engine comes from the standard library; the
/// continuous and discrete transforms are implemented here so a given seed
/// yields the same draws with any conforming standard library.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0, 1).
    double uniform();
    double standard_normal();
    /// Gamma with the given shape and unit scale; valid for any shape > 0.
    double gamma(double shape);
    /// Natural log of a unit-scale gamma draw. Finite even for tiny shapes
    /// where the draw itself underflows to zero.
    double log_gamma_variate(double shape);
    std::int64_t poisson(double mean);

private:
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-based seed derivation: folds each word into the master seed.
/// The result depends only on the inputs, never on call order elsewhere.
std::uint64_t derive_seed(std::uint64_t master, std::span<const std::uint64_t> words) noexcept;
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> words) noexcept;

} // namespace nbmeans
