#pragma once

#include <cstdint>
#include <string>

#include "houin/rational.hpp"

namespace houin {

// SplitMix64: the standard 64-bit generator (Steele/Lea/Vigna constants).
// Chosen because it is specified as plain integer arithmetic, so ports in
// any language produce bit-identical streams for the same seed.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound) by rejection, bound >= 1.
    std::uint64_t below(std::uint64_t bound);
};

struct GenConfig {
    std::int64_t transactions = 0;
    std::int64_t items = 0;
    std::int64_t periods = 0;
    std::int64_t max_qty = 10;
    std::int64_t profit_lo = 1;   // magnitudes, >= 1
    std::int64_t profit_hi = 10;
    Rational neg_fraction;        // exactly floor(F * items) items go negative
    std::int64_t min_len = 4;     // items per transaction (clamped to the catalog)
    std::int64_t max_len = 12;
    std::uint64_t seed = 0;

    void validate() const;  // RangeError on bad bounds
};

struct GeneratedData {
    std::string db_text;      // period_length 1: transaction j gets time ((j-1) mod P) + 1
    std::string profit_text;
};

// Deterministic synthetic dataset: Zipf-weighted item popularity, uniform
// quantities, uniform profit magnitudes with the chosen subset negated.
// Same config -> byte-identical files.
GeneratedData generate_dataset(const GenConfig& config);

// Modification batches in the mods-stream format (batches separated by a
// blank line). Each batch replaces `per_batch` distinct tids with fresh
// draws from the same transaction model.
std::string generate_mods_stream(const GenConfig& config, std::int64_t batches,
                                 std::int64_t per_batch, std::uint64_t seed);

}  // namespace houin
