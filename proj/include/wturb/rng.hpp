#pragma once

#include <cstdint>
#include <random>

namespace wturb {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Deterministic RNG. Uniforms are built directly from raw mt19937_64 output
// so sequences do not depend on the standard library's distribution
// implementations; Gaussians use Box-Muller.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Independent stream derived from (seed, stream index), e.g. one per
    // Monte Carlo draw.
    static Rng derive(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t s = seed;
        std::uint64_t a = splitmix64(s);
        s = seed ^ (0x6a09e667f3bcc909ull + stream * 0x9e3779b97f4a7c15ull);
        std::uint64_t b = splitmix64(s);
        return Rng(a ^ (b + 0x2545f4914f6cdd1dull));
    }

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1], for safe log().
    double uniform_pos() { return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = uniform_pos();
        double v = uniform();
        double r = std::sqrt(-2.0 * std::log(u));
        double a = 6.283185307179586476925286766559 * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace wturb
