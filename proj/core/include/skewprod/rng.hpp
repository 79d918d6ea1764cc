#pragma once

#include <cstdint>

namespace skewprod {

// Counter-based generator built on the SplitMix64 finalizer. Output i of a
// stream keyed by k is mix64(k + (i+1)*golden), so any position is
// addressable without sequencing and distinct keys give independent streams.
//
// Stream derivation is a fixed tree, documented here because reproducibility
// across runs and thread counts depends on it:
//   user seed
//     -> derive(seed, ensemble_tag)   one key per ensemble of an experiment
//     -> derive(ensemble, path_index) one key per path
//     -> derive(path, component)      one key per Wiener component (0..dim-1)
//     -> derive(path, kBridgeTag)     clock-grid imputation noise
// Every consumer owns a disjoint subtree, so paths can be generated in any
// order, on any thread, with identical output.

inline constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ull;
inline constexpr std::uint64_t kDeriveSalt = 0xD1B54A32D192ED03ull;
inline constexpr std::uint64_t kBridgeTag = 8;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t derive_key(std::uint64_t key, std::uint64_t id) {
    return mix64(mix64(key ^ kDeriveSalt) + id * kGolden64);
}

class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGolden64); }

    // Uniform in (0, 1]: never 0, so it is safe under a logarithm.
    double next_unit_open() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
    }
    // Uniform in [0, 1).
    double next_unit_halfopen() {
        return static_cast<double>(next_u64() >> 11) * 0x1p-53;
    }

    // Standard normal via Box-Muller; draws are produced in pairs and the
    // spare is cached.
    double next_normal();

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace skewprod
