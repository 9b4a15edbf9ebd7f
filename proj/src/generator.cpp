#include "houin/generator.hpp"

#include <algorithm>
#include <set>
#include <vector>

#include "houin/types.hpp"

namespace houin {

std::uint64_t SplitMix64::below(std::uint64_t bound) {
    if (bound == 0) throw RangeError("zero bound");
    const std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % bound);
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % bound;
}

void GenConfig::validate() const {
    if (transactions < 1 || items < 1 || periods < 1) {
        throw RangeError("transactions, items, periods must all be >= 1");
    }
    if (max_qty < 1) throw RangeError("max quantity must be >= 1");
    if (profit_lo < 1 || profit_lo > profit_hi) {
        throw RangeError("profit range must satisfy 1 <= lo <= hi");
    }
    if (neg_fraction.is_negative() || neg_fraction > Rational(1)) {
        throw RangeError("negative fraction must be in [0, 1]");
    }
    if (min_len < 1 || min_len > max_len) {
        throw RangeError("transaction length range must satisfy 1 <= min <= max");
    }
}

namespace {

// Integer Zipf weights (floor(1e6 / rank)) so sampling is exact integer
// arithmetic: identical across platforms.
std::vector<std::uint64_t> zipf_cumulative(std::int64_t items) {
    std::vector<std::uint64_t> cum(static_cast<std::size_t>(items));
    std::uint64_t total = 0;
    for (std::int64_t i = 1; i <= items; ++i) {
        total += 1000000ull / static_cast<std::uint64_t>(i);
        cum[static_cast<std::size_t>(i - 1)] = total;
    }
    return cum;
}

std::int64_t sample_item(const std::vector<std::uint64_t>& cum, SplitMix64& rng) {
    std::uint64_t r = rng.below(cum.back());
    auto it = std::upper_bound(cum.begin(), cum.end(), r);
    return static_cast<std::int64_t>(it - cum.begin()) + 1;
}

// One transaction's item list: distinct Zipf draws with a deterministic
// sequential fallback when rejection stalls.
std::vector<std::pair<std::int64_t, std::int64_t>> draw_items(
    const GenConfig& config, const std::vector<std::uint64_t>& cum, SplitMix64& rng) {
    std::int64_t span = config.max_len - config.min_len + 1;
    std::int64_t len = config.min_len + static_cast<std::int64_t>(rng.below(
                                            static_cast<std::uint64_t>(span)));
    len = std::min(len, config.items);

    std::set<std::int64_t> chosen;
    std::int64_t attempts = 0;
    while (static_cast<std::int64_t>(chosen.size()) < len && attempts < 64 * len) {
        chosen.insert(sample_item(cum, rng));
        ++attempts;
    }
    std::int64_t next_fill = 1;
    while (static_cast<std::int64_t>(chosen.size()) < len) {
        chosen.insert(next_fill++);
    }

    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    out.reserve(chosen.size());
    for (std::int64_t item : chosen) {
        std::int64_t qty =
            1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(config.max_qty)));
        out.emplace_back(item, qty);
    }
    return out;
}

}  // namespace

GeneratedData generate_dataset(const GenConfig& config) {
    config.validate();
    GeneratedData out;

    // Profits first so a consumer interning the profit file gets ids 1..M.
    SplitMix64 profit_rng(config.seed ^ 0x70726f66ull);  // distinct stream per section
    std::int64_t span = config.profit_hi - config.profit_lo + 1;
    std::vector<std::int64_t> magnitudes(static_cast<std::size_t>(config.items));
    for (auto& m : magnitudes) {
        m = config.profit_lo +
            static_cast<std::int64_t>(profit_rng.below(static_cast<std::uint64_t>(span)));
    }
    std::vector<std::int64_t> order(static_cast<std::size_t>(config.items));
    for (std::int64_t i = 0; i < config.items; ++i) order[static_cast<std::size_t>(i)] = i;
    for (std::size_t i = order.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(profit_rng.below(i));
        std::swap(order[i - 1], order[j]);
    }
    const __int128 scaled = __int128(config.neg_fraction.num()) * config.items;
    const std::int64_t neg_count =
        static_cast<std::int64_t>(scaled / config.neg_fraction.den());
    std::vector<bool> negative(static_cast<std::size_t>(config.items), false);
    for (std::int64_t i = 0; i < neg_count; ++i) {
        negative[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = true;
    }
    for (std::int64_t i = 0; i < config.items; ++i) {
        std::int64_t profit = magnitudes[static_cast<std::size_t>(i)];
        if (negative[static_cast<std::size_t>(i)]) profit = -profit;
        out.profit_text += std::to_string(i + 1) + " " + std::to_string(profit) + "\n";
    }

    SplitMix64 rng(config.seed);
    auto cum = zipf_cumulative(config.items);
    for (std::int64_t j = 1; j <= config.transactions; ++j) {
        std::int64_t time = ((j - 1) % config.periods) + 1;
        out.db_text += std::to_string(j) + " " + std::to_string(time);
        for (const auto& [item, qty] : draw_items(config, cum, rng)) {
            out.db_text += " " + std::to_string(item) + ":" + std::to_string(qty);
        }
        out.db_text += "\n";
    }
    return out;
}

std::string generate_mods_stream(const GenConfig& config, std::int64_t batches,
                                 std::int64_t per_batch, std::uint64_t seed) {
    config.validate();
    if (batches < 1 || per_batch < 1) {
        throw RangeError("batch counts must be >= 1");
    }
    if (per_batch > config.transactions) {
        throw RangeError("batch larger than the transaction count");
    }
    SplitMix64 rng(seed ^ 0x6d6f6473ull);
    auto cum = zipf_cumulative(config.items);
    std::string out;
    for (std::int64_t b = 0; b < batches; ++b) {
        if (b > 0) out += "\n";
        std::set<std::int64_t> tids;
        while (static_cast<std::int64_t>(tids.size()) < per_batch) {
            tids.insert(1 + static_cast<std::int64_t>(
                                rng.below(static_cast<std::uint64_t>(config.transactions))));
        }
        for (std::int64_t tid : tids) {
            out += std::to_string(tid);
            for (const auto& [item, qty] : draw_items(config, cum, rng)) {
                out += " " + std::to_string(item) + ":" + std::to_string(qty);
            }
            out += "\n";
        }
    }
    return out;
}

}  // namespace houin
