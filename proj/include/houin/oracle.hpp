#pragma once

#include <cstdint>
#include <vector>

#include "houin/miner.hpp"
#include "houin/temporal_db.hpp"

namespace houin::oracle {

// The oracle is definitional: it evaluates every co-occurring itemset with
// the measures module alone, no trees and no pruning. A tree bug cannot
// reach it, which is what makes the miner-vs-oracle comparison meaningful.

struct OracleConfig {
    std::size_t max_itemset_size = 0;  // 0 = unbounded
    bool osp_intersection = false;     // default is the union reading
};

// Every non-empty itemset whose members co-occur in at least one
// transaction, up to max_size, each exactly once, in lexicographic order.
// Refuses (SizeGuardError) beyond 2^20 distinct itemsets.
std::vector<std::vector<ItemId>> enumerate_itemsets(const TemporalDatabase& db,
                                                    std::size_t max_size);

MiningResult brute_force_houin(const TemporalDatabase& db, const ProfitTable& profits,
                               const MiningConfig& config, const OracleConfig& oc = {});

struct BaselineOutput {
    MiningResult result;
    std::int64_t scan_count = 0;  // period builds + the Phase-2 pass
    double wall_ms = 0.0;
};

// The rebuild-from-scratch comparison target: applies the batch, then runs
// the full miner on the modified view.
BaselineOutput remine_baseline(const TemporalDatabase& db, const ModificationBatch& batch,
                               const ProfitTable& profits, const MiningConfig& config);

}  // namespace houin::oracle
