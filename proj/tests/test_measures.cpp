#include "doctest.h"

#include <algorithm>

#include "support.hpp"

using namespace houin;

namespace {

// Non-empty subsets (by ids) of the items present in a database.
std::vector<std::vector<ItemId>> all_itemsets(const testsupport::RandomDb& data) {
    std::vector<ItemId> ids;
    for (std::size_t i = 1; i <= data.catalog.size(); ++i) {
        ids.push_back(static_cast<ItemId>(i));
    }
    std::vector<std::vector<ItemId>> out;
    const std::size_t n = ids.size();
    for (std::size_t mask = 1; mask < (std::size_t(1) << n); ++mask) {
        std::vector<ItemId> set;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::size_t(1) << i)) set.push_back(ids[i]);
        }
        out.push_back(std::move(set));
    }
    return out;
}

}  // namespace

TEST_SUITE_BEGIN("measures");

TEST_CASE("golden transaction utilities") {
    auto f = testsupport::golden();
    const std::int64_t expected[] = {31, 14, 43, 23, 6, 58, 18, 8, 82};
    for (Tid tid = 1; tid <= 9; ++tid) {
        CHECK(transaction_utility(f.db.transaction(tid), f.profits) ==
              Rational(expected[tid - 1]));
    }
}

TEST_CASE("golden per-period totals") {
    auto f = testsupport::golden();
    CHECK(pttu(1, f.db, f.profits) == Rational(88));
    CHECK(pttu(2, f.db, f.profits) == Rational(87));
    CHECK(pttu(3, f.db, f.profits) == Rational(108));
    CHECK_THROWS_AS(pttu(4, f.db, f.profits), RangeError);

    ItemCatalog c;
    std::istringstream in("1 1 X:1");
    auto db = assign_periods(parse_database(in, c), 1);
    ProfitTable profits;
    profits.set(*c.find("X"), Rational(-3));
    CHECK(pttu(1, db, profits) == Rational(0));  // only-negative transaction

    ItemCatalog c2;
    std::istringstream gap("1 1 X:1\n2 7 X:2");
    auto gap_db = assign_periods(parse_database(gap, c2), 3);
    ProfitTable gap_profits;
    gap_profits.set(*c2.find("X"), Rational(2));
    CHECK(pttu(2, gap_db, gap_profits) == Rational(0));  // empty period
}

TEST_CASE("item utility") {
    auto f = testsupport::golden();
    CHECK(item_utility(f.A, f.db.transaction(3), f.profits) == Rational(5));
    CHECK(item_utility(f.B, f.db.transaction(1), f.profits) == Rational(-8));
    CHECK_THROWS_AS(item_utility(f.A, f.db.transaction(5), f.profits), AbsentItemError);
}

TEST_CASE("itemset utility and the absence marker") {
    auto f = testsupport::golden();
    CHECK(*itemset_utility({f.A, f.D}, f.db.transaction(1), f.profits) == Rational(29));
    CHECK(*itemset_utility({f.A, f.B}, f.db.transaction(7), f.profits) == Rational(0));
    CHECK_FALSE(itemset_utility({f.A, f.D}, f.db.transaction(5), f.profits).has_value());
}

TEST_CASE("transaction utility ignores negative items") {
    auto f = testsupport::golden();
    CHECK(transaction_utility(f.db.transaction(1), f.profits) == Rational(31));
    CHECK(transaction_utility(f.db.transaction(9), f.profits) == Rational(82));

    TemporalTransaction only_neg;
    only_neg.tid = 100;
    only_neg.time = 1;
    only_neg.items = {{f.B, 3}};
    CHECK(transaction_utility(only_neg, f.profits) == Rational(0));
}

TEST_CASE("periodical utility") {
    auto f = testsupport::golden();
    CHECK(periodical_utility({f.C}, 1, f.db, f.profits) == Rational(16));
    CHECK(periodical_utility({f.B}, 2, f.db, f.profits) == Rational(-32));
    ItemId ghost = f.catalog.intern("ghost");
    CHECK(periodical_utility({ghost}, 1, f.db, f.profits) == Rational(0));
}

TEST_CASE("period twu") {
    auto f = testsupport::golden();
    CHECK(period_twu({f.D}, 1, f.db, f.profits) == Rational(74));  // 31 + 43
    CHECK(period_twu({f.A, f.C}, 1, f.db, f.profits) == Rational(88));
    ItemId ghost = f.catalog.intern("ghost");
    CHECK(period_twu({ghost}, 2, f.db, f.profits) == Rational(0));
}

TEST_CASE("on-shelf periods use the union over members") {
    auto f = testsupport::golden();
    CHECK(on_shelf_periods({f.D}, f.db) == std::set<std::size_t>{1, 2, 3});
    CHECK(on_shelf_periods({f.A, f.C}, f.db) == std::set<std::size_t>{1, 2, 3});
    ItemId ghost = f.catalog.intern("ghost");
    CHECK(on_shelf_periods({ghost}, f.db).empty());
}

TEST_CASE("on-shelf utility") {
    auto f = testsupport::golden();
    CHECK(on_shelf_utility({f.D}, f.db, f.profits) == Rational(80));
    CHECK(on_shelf_utility({f.B}, f.db, f.profits) == Rational(-56));
    ItemId ghost = f.catalog.intern("ghost");
    CHECK(on_shelf_utility({ghost}, f.db, f.profits) == Rational(0));
}

TEST_CASE("on-shelf utility ratio") {
    auto f = testsupport::golden();
    CHECK(on_shelf_utility_ratio({f.D}, f.db, f.profits) == Rational(80, 283));
    CHECK(on_shelf_utility_ratio({f.A, f.D}, f.db, f.profits) == Rational(212, 283));
    CHECK(on_shelf_utility_ratio({f.A, f.B}, f.db, f.profits) == Rational(104, 283));

    ItemId ghost = f.catalog.intern("ghost");
    CHECK_THROWS_AS(on_shelf_utility_ratio({ghost}, f.db, f.profits), UndefinedRatioError);

    // All on-shelf periods carrying zero total utility is undefined too.
    ItemCatalog c;
    std::istringstream in("1 1 X:2");
    auto db = assign_periods(parse_database(in, c), 1);
    ProfitTable profits;
    profits.set(*c.find("X"), Rational(-1));
    CHECK_THROWS_AS(on_shelf_utility_ratio({*c.find("X")}, db, profits), UndefinedRatioError);
}

TEST_CASE("qualification is inclusive at the boundary") {
    auto f = testsupport::golden();
    MiningConfig cfg;
    cfg.min_util_ratio = Rational(3, 10);
    CHECK(is_houin({f.A, f.D}, f.db, f.profits, cfg));
    CHECK_FALSE(is_houin({f.B}, f.db, f.profits, cfg));

    cfg.min_util_ratio = Rational(80, 283);
    CHECK(is_houin({f.D}, f.db, f.profits, cfg));  // >= is inclusive

    ItemId ghost = f.catalog.intern("ghost");
    bool defined = true;
    cfg.min_util_ratio = Rational(1, 10);
    CHECK_FALSE(is_houin({ghost}, f.db, f.profits, cfg, &defined));
    CHECK_FALSE(defined);
}

TEST_CASE("twu difference across views") {
    auto f = testsupport::golden();

    ModificationBatch shrink;
    shrink.add(5, ItemQuantities{{f.C, 2}});
    TemporalDatabase shrunk = apply_modifications(f.db, shrink);
    CHECK(twu_difference(f.C, 2, f.db, shrunk, f.profits) == Rational(-4));
    CHECK(twu_difference(f.A, 1, f.db, shrunk, f.profits) == Rational(0));

    ModificationBatch grow;
    grow.add(8, ItemQuantities{{f.D, 2}, {f.A, 3}});
    TemporalDatabase grown = apply_modifications(f.db, grow);
    CHECK(twu_difference(f.A, 3, f.db, grown, f.profits) == Rational(23));
}

TEST_CASE("pruning bound and anti-monotonicity on the golden data") {
    auto f = testsupport::golden();
    const std::vector<ItemId> ids{f.A, f.B, f.C, f.D};
    for (std::size_t mask = 1; mask < 16; ++mask) {
        std::vector<ItemId> set;
        for (std::size_t i = 0; i < 4; ++i) {
            if (mask & (std::size_t(1) << i)) set.push_back(ids[i]);
        }
        for (std::size_t p = 1; p <= 3; ++p) {
            CHECK(periodical_utility(set, p, f.db, f.profits) <=
                  period_twu(set, p, f.db, f.profits));
        }
    }
}

TEST_CASE("properties on random databases") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto data = testsupport::random_db(seed);
        auto itemsets = all_itemsets(data);

        for (const auto& set : itemsets) {
            for (std::size_t p = 1; p <= data.db.period_count(); ++p) {
                // upper bound: pu <= twu because tu keeps only positive items
                CHECK(periodical_utility(set, p, data.db, data.profits) <=
                      period_twu(set, p, data.db, data.profits));
                // anti-monotonicity against every superset one item larger
                for (std::size_t j = 1; j <= data.catalog.size(); ++j) {
                    ItemId extra = static_cast<ItemId>(j);
                    if (std::find(set.begin(), set.end(), extra) != set.end()) continue;
                    std::vector<ItemId> super = set;
                    super.push_back(extra);
                    std::sort(super.begin(), super.end());
                    CHECK(period_twu(super, p, data.db, data.profits) <=
                          period_twu(set, p, data.db, data.profits));
                }
            }
        }
    }
}

TEST_CASE("additivity of itemset utility") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto data = testsupport::random_db(seed);
        for (std::size_t p = 1; p <= data.db.period_count(); ++p) {
            for (const auto& tr : data.db.period(p)) {
                if (tr.items.size() < 2) continue;
                ItemId a = tr.items[0].first;
                ItemId b = tr.items[1].first;
                CHECK(*itemset_utility({a, b}, tr, data.profits) ==
                      item_utility(a, tr, data.profits) + item_utility(b, tr, data.profits));
            }
        }
    }
}

TEST_CASE("twu difference is linear in the modified transactions") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto data = testsupport::random_db(seed);
        auto batch = testsupport::random_batch(data, seed);
        TemporalDatabase modified = apply_modifications(data.db, batch);
        for (std::size_t item = 1; item <= data.catalog.size(); ++item) {
            ItemId id = static_cast<ItemId>(item);
            for (std::size_t p = 1; p <= data.db.period_count(); ++p) {
                Rational expect;
                for (const auto& [tid, items] : batch.entries()) {
                    (void)items;
                    if (data.db.period_of(tid) != p) continue;
                    const auto& before = data.db.transaction(tid);
                    const auto& after = modified.transaction(tid);
                    if (after.contains(id)) {
                        expect += transaction_utility(after, data.profits);
                    }
                    if (before.contains(id)) {
                        expect -= transaction_utility(before, data.profits);
                    }
                }
                CHECK(twu_difference(id, p, data.db, modified, data.profits) == expect);
            }
        }
    }
}

TEST_CASE("scaling all profits leaves every verdict unchanged") {
    auto f = testsupport::golden();
    const Rational scale(7, 3);
    ProfitTable scaled;
    for (const auto& [item, profit] : f.profits.entries()) {
        scaled.set(item, profit * scale);
    }
    const std::vector<ItemId> ids{f.A, f.B, f.C, f.D};
    MiningConfig cfg;
    cfg.min_util_ratio = Rational(3, 10);
    for (std::size_t mask = 1; mask < 16; ++mask) {
        std::vector<ItemId> set;
        for (std::size_t i = 0; i < 4; ++i) {
            if (mask & (std::size_t(1) << i)) set.push_back(ids[i]);
        }
        for (std::size_t p = 1; p <= 3; ++p) {
            CHECK(periodical_utility(set, p, f.db, scaled) ==
                  periodical_utility(set, p, f.db, f.profits) * scale);
            CHECK(period_twu(set, p, f.db, scaled) ==
                  period_twu(set, p, f.db, f.profits) * scale);
        }
        CHECK(on_shelf_utility_ratio(set, f.db, scaled) ==
              on_shelf_utility_ratio(set, f.db, f.profits));
        CHECK(is_houin(set, f.db, scaled, cfg) == is_houin(set, f.db, f.profits, cfg));
    }
}

TEST_SUITE_END();
