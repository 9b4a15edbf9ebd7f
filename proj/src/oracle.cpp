#include "houin/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "houin/measures.hpp"

namespace houin::oracle {

namespace {

constexpr std::size_t kEnumerationGuard = std::size_t(1) << 20;

void subsets_of(const std::vector<ItemId>& items, std::size_t max_size,
                std::set<std::vector<ItemId>>& out) {
    std::vector<ItemId> current;
    auto rec = [&](auto&& self, std::size_t idx) -> void {
        if (!current.empty()) {
            out.insert(current);
            if (out.size() > kEnumerationGuard) {
                throw SizeGuardError("itemset enumeration exceeds guard of 2^20");
            }
        }
        if (max_size != 0 && current.size() >= max_size) return;
        for (std::size_t i = idx; i < items.size(); ++i) {
            current.push_back(items[i]);
            self(self, i + 1);
            current.pop_back();
        }
    };
    rec(rec, 0);
}

}  // namespace

std::vector<std::vector<ItemId>> enumerate_itemsets(const TemporalDatabase& db,
                                                    std::size_t max_size) {
    std::set<std::vector<ItemId>> found;
    for (std::size_t p = 1; p <= db.period_count(); ++p) {
        for (const auto& tr : db.period(p)) {
            std::vector<ItemId> items;
            items.reserve(tr.items.size());
            for (const auto& [item, qty] : tr.items) {
                (void)qty;
                items.push_back(item);
            }
            subsets_of(items, max_size, found);
        }
    }
    return {found.begin(), found.end()};
}

MiningResult brute_force_houin(const TemporalDatabase& db, const ProfitTable& profits,
                               const MiningConfig& config, const OracleConfig& oc) {
    config.validate();
    std::size_t cap = config.max_itemset_size;
    if (oc.max_itemset_size != 0 && (cap == 0 || oc.max_itemset_size < cap)) {
        cap = oc.max_itemset_size;
    }

    MiningResult result;
    auto itemsets = enumerate_itemsets(db, cap);
    result.stats.db_scan_count = 1;  // one enumeration pass over the database
    result.stats.candidate_count = static_cast<std::int64_t>(itemsets.size());

    for (const auto& itemset : itemsets) {
        std::set<std::size_t> shelf;
        if (oc.osp_intersection) {
            bool first = true;
            for (ItemId i : itemset) {
                auto single = on_shelf_periods({i}, db);
                if (first) {
                    shelf = std::move(single);
                    first = false;
                } else {
                    std::set<std::size_t> merged;
                    std::set_intersection(shelf.begin(), shelf.end(), single.begin(),
                                          single.end(),
                                          std::inserter(merged, merged.begin()));
                    shelf = std::move(merged);
                }
            }
        } else {
            shelf = on_shelf_periods(itemset, db);
        }
        if (shelf.empty()) continue;

        Rational denom;
        for (std::size_t p : shelf) denom += pttu(p, db, profits);
        if (denom.is_zero()) continue;
        Rational ou;
        for (std::size_t p : shelf) ou += periodical_utility(itemset, p, db, profits);
        Rational osur = ou / denom;
        if (osur >= config.min_util_ratio) {
            result.houin.push_back(HouinEntry{itemset, std::move(shelf), std::move(ou),
                                              std::move(osur)});
        }
    }
    return result;
}

BaselineOutput remine_baseline(const TemporalDatabase& db, const ModificationBatch& batch,
                               const ProfitTable& profits, const MiningConfig& config) {
    BaselineOutput out;
    auto start = std::chrono::steady_clock::now();
    TemporalDatabase modified = apply_modifications(db, batch);
    MineOutput mined = mine_houin(modified, profits, config);
    auto end = std::chrono::steady_clock::now();
    out.result = std::move(mined.result);
    out.scan_count = out.result.stats.db_scan_count;
    out.wall_ms = std::chrono::duration<double, std::milli>(end - start).count();
    return out;
}

}  // namespace houin::oracle
