#include "houin/measures.hpp"

#include <algorithm>

namespace houin {

namespace {

bool contains_all(const TemporalTransaction& tr, const std::vector<ItemId>& itemset) {
    return std::all_of(itemset.begin(), itemset.end(),
                       [&](ItemId i) { return tr.contains(i); });
}

}  // namespace

Rational item_utility(ItemId item, const TemporalTransaction& tr, const ProfitTable& profits) {
    std::int64_t qty = tr.quantity(item);
    if (qty == 0) {
        throw AbsentItemError("item id " + std::to_string(item) + " absent from tid " +
                              std::to_string(tr.tid));
    }
    return profits.profit(item) * Rational(qty);
}

std::optional<Rational> itemset_utility(const std::vector<ItemId>& itemset,
                                        const TemporalTransaction& tr,
                                        const ProfitTable& profits) {
    if (!contains_all(tr, itemset)) return std::nullopt;
    Rational sum;
    for (ItemId i : itemset) sum += profits.profit(i) * Rational(tr.quantity(i));
    return sum;
}

Rational transaction_utility(const TemporalTransaction& tr, const ProfitTable& profits) {
    Rational sum;
    for (const auto& [item, qty] : tr.items) {
        const Rational& pr = profits.profit(item);
        if (pr.is_positive()) sum += pr * Rational(qty);
    }
    return sum;
}

Rational periodical_utility(const std::vector<ItemId>& itemset, std::size_t period,
                            const TemporalDatabase& db, const ProfitTable& profits) {
    Rational sum;
    for (const auto& tr : db.period(period)) {
        if (auto u = itemset_utility(itemset, tr, profits)) sum += *u;
    }
    return sum;
}

Rational pttu(std::size_t period, const TemporalDatabase& db, const ProfitTable& profits) {
    Rational sum;
    for (const auto& tr : db.period(period)) sum += transaction_utility(tr, profits);
    return sum;
}

Rational period_twu(const std::vector<ItemId>& itemset, std::size_t period,
                    const TemporalDatabase& db, const ProfitTable& profits) {
    Rational sum;
    for (const auto& tr : db.period(period)) {
        if (contains_all(tr, itemset)) sum += transaction_utility(tr, profits);
    }
    return sum;
}

std::set<std::size_t> on_shelf_periods(const std::vector<ItemId>& itemset,
                                       const TemporalDatabase& db) {
    std::set<std::size_t> shelf;
    for (std::size_t p = 1; p <= db.period_count(); ++p) {
        for (const auto& tr : db.period(p)) {
            if (std::any_of(itemset.begin(), itemset.end(),
                            [&](ItemId i) { return tr.contains(i); })) {
                shelf.insert(p);
                break;
            }
        }
    }
    return shelf;
}

Rational on_shelf_utility(const std::vector<ItemId>& itemset, const TemporalDatabase& db,
                          const ProfitTable& profits) {
    Rational sum;
    for (std::size_t p : on_shelf_periods(itemset, db)) {
        sum += periodical_utility(itemset, p, db, profits);
    }
    return sum;
}

Rational on_shelf_utility_ratio(const std::vector<ItemId>& itemset, const TemporalDatabase& db,
                                const ProfitTable& profits) {
    auto shelf = on_shelf_periods(itemset, db);
    if (shelf.empty()) {
        throw UndefinedRatioError("itemset occurs in no period");
    }
    Rational denom;
    for (std::size_t p : shelf) denom += pttu(p, db, profits);
    if (denom.is_zero()) {
        throw UndefinedRatioError("all on-shelf periods carry zero total utility");
    }
    Rational numer;
    for (std::size_t p : shelf) numer += periodical_utility(itemset, p, db, profits);
    return numer / denom;
}

bool is_houin(const std::vector<ItemId>& itemset, const TemporalDatabase& db,
              const ProfitTable& profits, const MiningConfig& config, bool* ratio_defined) {
    if (ratio_defined) *ratio_defined = true;
    try {
        return on_shelf_utility_ratio(itemset, db, profits) >= config.min_util_ratio;
    } catch (const UndefinedRatioError&) {
        if (ratio_defined) *ratio_defined = false;
        return false;
    }
}

Rational twu_difference(ItemId item, std::size_t period, const TemporalDatabase& before,
                        const TemporalDatabase& after, const ProfitTable& profits) {
    if (before.period_count() != after.period_count() ||
        before.transaction_count() != after.transaction_count()) {
        throw InconsistencyError("before/after views differ in structure");
    }
    const std::vector<ItemId> single{item};
    return period_twu(single, period, after, profits) -
           period_twu(single, period, before, profits);
}

}  // namespace houin
