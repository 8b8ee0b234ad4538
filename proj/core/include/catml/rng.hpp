#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace catml {

// Seed used by the CLI and the experiment harness when none is given.
inline constexpr std::uint64_t kDefaultSeed = 1729;

// Deterministic generator shared by every randomized operation.
//
// The bit stream is std::mt19937_64, whose output sequence is fixed by the
// C++ standard. The standard <random> distributions are not portable across
// library implementations, so bounded integers and unit reals are derived
// here directly from the raw 64-bit words:
//   - uniform_index(n): rejection sampling on the top of the 64-bit range
//     (no modulo bias);
//   - uniform01(): the top 53 bits scaled by 2^-53.
// Independent streams come from reseeding with derive_seed(master, purpose).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n);

    // Uniform real in [0, 1).
    double uniform01();

    bool bernoulli(double p) { return uniform01() < p; }

    // Fisher-Yates, walking from the back.
    template <typename T>
    void shuffle(std::span<T> values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_index(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// FNV-1a over the bytes of text.
std::uint64_t hash64(std::string_view text);

// Per-task seed: mix64(master ^ hash64(purpose)). Two tasks with different
// purpose strings get unrelated streams, and a task can be rerun in
// isolation from the master seed alone.
std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose);

}  // namespace catml
