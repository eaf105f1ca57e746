#pragma once

#include <cstdint>
#include <random>

namespace oig
{
    // Seeded RNG for corpora and restarts. Bounded draws use plain modulo so
    // that frozen seeds reproduce the same corpus on any standard library.
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) :
            seed_(seed),
            engine_(seed)
        {
        }

        std::uint64_t next()
        {
            return engine_();
        }

        std::uint64_t below(std::uint64_t bound)
        {
            return engine_() % bound;
        }

        int below_int(int bound)
        {
            return static_cast<int>(below(static_cast<std::uint64_t>(bound)));
        }

        bool chance_one_in(std::uint64_t n)
        {
            return below(n) == 0;
        }

        // Child stream k; independent of how many draws the parent has made.
        Rng derive(std::uint64_t stream) const
        {
            return Rng(mix(seed_ ^ (0x9E3779B97F4A7C15ull * (stream + 1))));
        }

    private:
        static std::uint64_t mix(std::uint64_t z)
        {
            z += 0x9E3779B97F4A7C15ull;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
            return z ^ (z >> 31);
        }

        std::uint64_t seed_;
        std::mt19937_64 engine_;
    };
}
