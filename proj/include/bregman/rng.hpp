#ifndef BREGMAN_RNG_HPP
#define BREGMAN_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace bregman {

/// Deterministic random stream used by the instance generators.
///
/// The engine is the standard 64-bit Mersenne Twister (mt19937_64), whose
/// output sequence is fully specified by the C++ standard. The variate
/// transforms are implemented here instead of using <random> distributions,
/// because the standard leaves those implementation-defined: uniforms take
/// the top 53 bits of one engine draw, normals use the Box-Muller transform
/// on a uniform pair. A given seed therefore yields the same stream on
/// every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1].
    double uniform_pos() { return 1.0 - uniform(); }

    /// Standard normal via Box-Muller; consumes two uniforms per pair.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace bregman

#endif
