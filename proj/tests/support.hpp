#pragma once

// Shared fixtures for the test suites: the small retail sample used as the
// golden dataset, plus seeded random databases and batches for property
// tests. Everything is deterministic in the seed.

#include <sstream>
#include <string>
#include <vector>

#include "houin/generator.hpp"
#include "houin/measures.hpp"
#include "houin/temporal_db.hpp"

namespace testsupport {

struct Fixture {
    houin::ItemCatalog catalog;
    houin::ProfitTable profits;
    houin::TemporalDatabase db;
    houin::ItemId A = 0, B = 0, C = 0, D = 0;
};

inline const char* kGoldenProfits = "A 5\nB -2\nC 1\nD 4\n";

inline const char* kGoldenDb =
    "1 1 A:5 B:4 C:2 D:1\n"
    "2 2 A:2 C:4\n"
    "3 3 A:1 B:1 C:10 D:7\n"
    "4 4 A:4 B:7 C:3\n"
    "5 5 C:6\n"
    "6 6 A:10 B:9 D:2\n"
    "7 7 A:2 B:5 C:4 D:1\n"
    "8 8 D:2\n"
    "9 9 A:10 B:2 C:4 D:7\n";

inline Fixture golden() {
    Fixture f;
    std::istringstream prof(kGoldenProfits);
    f.profits = houin::parse_profit_table(prof, f.catalog);
    std::istringstream db(kGoldenDb);
    f.db = houin::assign_periods(houin::parse_database(db, f.catalog), 3);
    f.A = *f.catalog.find("A");
    f.B = *f.catalog.find("B");
    f.C = *f.catalog.find("C");
    f.D = *f.catalog.find("D");
    return f;
}

struct RandomDb {
    houin::ItemCatalog catalog;
    houin::ProfitTable profits;
    houin::TemporalDatabase db;
};

// <= 8 items, <= 15 transactions, 3 periods, quantities 1..10, profits
// -5..5 with at least one strictly negative item.
inline RandomDb random_db(std::uint64_t seed) {
    houin::SplitMix64 rng(seed);
    RandomDb out;
    const std::int64_t item_count = 3 + static_cast<std::int64_t>(rng.below(6));  // 3..8
    std::vector<houin::ItemId> ids;
    for (std::int64_t i = 0; i < item_count; ++i) {
        ids.push_back(out.catalog.intern("i" + std::to_string(i + 1)));
    }
    for (std::int64_t i = 0; i < item_count; ++i) {
        std::int64_t profit;
        if (i == 0) {
            profit = -1 - static_cast<std::int64_t>(rng.below(5));  // -5..-1
        } else {
            profit = static_cast<std::int64_t>(rng.below(11)) - 5;  // -5..5
        }
        out.profits.set(ids[static_cast<std::size_t>(i)], houin::Rational(profit));
    }

    const std::int64_t tx_count = 4 + static_cast<std::int64_t>(rng.below(12));  // 4..15
    std::vector<houin::TemporalTransaction> transactions;
    for (std::int64_t t = 1; t <= tx_count; ++t) {
        houin::TemporalTransaction tr;
        tr.tid = t;
        tr.time = 1 + static_cast<std::int64_t>(rng.below(3));
        if (t == tx_count) tr.time = 3;  // keep three materialized periods
        const std::int64_t len =
            1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(
                    std::min<std::int64_t>(4, item_count))));
        std::vector<std::pair<houin::ItemId, std::int64_t>> raw;
        std::vector<bool> used(static_cast<std::size_t>(item_count), false);
        while (static_cast<std::int64_t>(raw.size()) < len) {
            auto pick = static_cast<std::size_t>(rng.below(
                static_cast<std::uint64_t>(item_count)));
            if (used[pick]) continue;
            used[pick] = true;
            raw.emplace_back(ids[pick], 1 + static_cast<std::int64_t>(rng.below(10)));
        }
        tr.items = houin::normalize_items(std::move(raw));
        transactions.push_back(std::move(tr));
    }
    out.db = houin::assign_periods(std::move(transactions), 1);
    return out;
}

// 1..max_mods distinct tids replaced with fresh random contents.
inline houin::ModificationBatch random_batch(const RandomDb& data, std::uint64_t seed,
                                             std::int64_t max_mods = 5) {
    houin::SplitMix64 rng(seed ^ 0x62617463ull);
    const auto item_count = static_cast<std::int64_t>(data.catalog.size());
    const auto tx_count = static_cast<std::int64_t>(data.db.transaction_count());
    houin::ModificationBatch batch;
    const std::int64_t mods =
        1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(
                std::min(max_mods, tx_count))));
    std::vector<bool> taken(static_cast<std::size_t>(tx_count) + 1, false);
    for (std::int64_t m = 0; m < mods; ++m) {
        std::int64_t tid;
        do {
            tid = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(tx_count)));
        } while (taken[static_cast<std::size_t>(tid)]);
        taken[static_cast<std::size_t>(tid)] = true;

        const std::int64_t len =
            1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(
                    std::min<std::int64_t>(4, item_count))));
        std::vector<std::pair<houin::ItemId, std::int64_t>> raw;
        std::vector<bool> used(static_cast<std::size_t>(item_count), false);
        while (static_cast<std::int64_t>(raw.size()) < len) {
            auto pick = static_cast<std::size_t>(rng.below(
                static_cast<std::uint64_t>(item_count)));
            if (used[pick]) continue;
            used[pick] = true;
            raw.emplace_back(static_cast<houin::ItemId>(pick + 1),
                             1 + static_cast<std::int64_t>(rng.below(10)));
        }
        batch.add(tid, houin::normalize_items(std::move(raw)));
    }
    return batch;
}

inline houin::Rational pick_lambda(std::uint64_t seed) {
    static const std::pair<std::int64_t, std::int64_t> pool[] = {
        {1, 20}, {1, 10}, {1, 5}, {3, 10}, {2, 5}, {1, 2}, {3, 5}, {7, 10}, {4, 5}, {9, 10}};
    houin::SplitMix64 rng(seed ^ 0x6c616d62ull);
    auto [n, d] = pool[rng.below(std::size(pool))];
    return houin::Rational(n, d);
}

}  // namespace testsupport
