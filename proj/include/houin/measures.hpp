#pragma once

#include <optional>
#include <set>
#include <vector>

#include "houin/temporal_db.hpp"
#include "houin/types.hpp"

namespace houin {

// Pure utility measures over immutable inputs. Everything here is exact
// rational arithmetic; the rest of the engine is checked against this module.

// pr(i) * q(i, tr); the item must be present.
Rational item_utility(ItemId item, const TemporalTransaction& tr, const ProfitTable& profits);

// Sum of member utilities when X is wholly contained in tr, nullopt otherwise
// (the absence marker; contributes nothing to aggregations).
std::optional<Rational> itemset_utility(const std::vector<ItemId>& itemset,
                                        const TemporalTransaction& tr,
                                        const ProfitTable& profits);

// Sum of utilities of the positive-profit items of tr. Negative-profit items
// are excluded so the value stays a valid upper-bound mass; a transaction of
// only negative items has utility 0.
Rational transaction_utility(const TemporalTransaction& tr, const ProfitTable& profits);

// Signed actual utility of X over the transactions of period p containing X.
Rational periodical_utility(const std::vector<ItemId>& itemset, std::size_t period,
                            const TemporalDatabase& db, const ProfitTable& profits);

// Sum of transaction utilities of period p.
Rational pttu(std::size_t period, const TemporalDatabase& db, const ProfitTable& profits);

// Sum of transaction utilities over the transactions of period p containing X.
Rational period_twu(const std::vector<ItemId>& itemset, std::size_t period,
                    const TemporalDatabase& db, const ProfitTable& profits);

// Union over members of the periods in which the member occurs.
std::set<std::size_t> on_shelf_periods(const std::vector<ItemId>& itemset,
                                       const TemporalDatabase& db);

// Sum of periodical utilities over the on-shelf periods.
Rational on_shelf_utility(const std::vector<ItemId>& itemset, const TemporalDatabase& db,
                          const ProfitTable& profits);

// on_shelf_utility / sum of pttu over the on-shelf periods; may be negative.
// Empty shelf set or zero denominator -> UndefinedRatioError.
Rational on_shelf_utility_ratio(const std::vector<ItemId>& itemset, const TemporalDatabase& db,
                                const ProfitTable& profits);

// ratio >= lambda, with >= inclusive. An undefined ratio yields false and,
// when the caller passes a flag, reports it there.
bool is_houin(const std::vector<ItemId>& itemset, const TemporalDatabase& db,
              const ProfitTable& profits, const MiningConfig& config,
              bool* ratio_defined = nullptr);

// period_twu on the after view minus period_twu on the before view. The two
// views must share tids and period structure.
Rational twu_difference(ItemId item, std::size_t period, const TemporalDatabase& before,
                        const TemporalDatabase& after, const ProfitTable& profits);

}  // namespace houin
