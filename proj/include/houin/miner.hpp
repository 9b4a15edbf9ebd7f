#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "houin/utility_tree.hpp"

namespace houin {

struct Candidate {
    std::vector<ItemId> items;           // ascending ids
    std::set<std::size_t> periods_high;  // periods whose threshold the projected twu cleared
};

struct HouinEntry {
    std::vector<ItemId> items;  // ascending ids
    std::set<std::size_t> osp;
    Rational ou;
    Rational osur;

    friend bool operator==(const HouinEntry&, const HouinEntry&) = default;
};

struct MiningStats {
    std::int64_t db_scan_count = 0;
    std::int64_t candidate_count = 0;
    std::int64_t tree_node_count = 0;
};

struct MiningResult {
    std::vector<HouinEntry> houin;  // sorted lexicographically on id sequences
    MiningStats stats;
};

// Items whose period twu clears lambda * pttu(p), in header order.
std::vector<ItemId> high_twu_items(const TemporalDatabase& db, std::size_t period,
                                   const ProfitTable& profits, const MiningConfig& config);

// All itemsets over header items whose projected twu in this period reaches
// the tree threshold. Projection is exact, so the result equals the set of
// itemsets with period_twu >= threshold, capped at max_size (0 = unbounded).
std::vector<std::vector<ItemId>> mine_period_candidates(const PeriodTree& tree,
                                                        std::size_t max_size);

// Phase 2: one pass over the retained database computing shelf periods and
// exact per-period utilities for every candidate, keeping those whose
// on-shelf utility ratio reaches lambda.
MiningResult evaluate_candidates(const std::vector<Candidate>& candidates,
                                 const TemporalDatabase& db, const ProfitTable& profits,
                                 const MiningConfig& config);

struct MineOutput {
    MiningResult result;
    std::vector<PeriodTree> trees;  // one per period, retained for maintenance
};

// Full run: build a tree per period, mine per-period candidates, evaluate.
MineOutput mine_houin(const TemporalDatabase& db, const ProfitTable& profits,
                      const MiningConfig& config);

// TSV with a header row; items and shelf periods comma-joined, utility in
// canonical form, ratio always as an exact fraction.
std::string serialize_result(const MiningResult& result, const ItemCatalog& catalog);

bool same_houin(const MiningResult& a, const MiningResult& b);

}  // namespace houin
