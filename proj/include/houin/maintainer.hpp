#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "houin/miner.hpp"
#include "houin/utility_tree.hpp"

namespace houin {

enum class CaseLabel { Case1, Case2, Case3, Case4 };

// Delta buckets routing the per-(item, period) classification outcome.
// Case-1 adjustments land in increase/decrease by sign; Case-2 entries land
// in decrease with the removal mark; Case-3 entries demand a period rescan.
struct DeltaEntry {
    ItemId item = 0;
    std::size_t period = 0;
    Rational twu_delta;
    bool remove = false;
};

struct DeltaSets {
    std::vector<DeltaEntry> increase;
    std::vector<DeltaEntry> decrease;
    std::vector<std::pair<ItemId, std::size_t>> rescan;
};

struct ItemShift {
    Rational twu_delta;
    std::int64_t occurrence_delta = 0;
};

struct Classification {
    TemporalDatabase modified_db;
    std::set<std::size_t> touched_periods;
    std::map<std::size_t, std::vector<Tid>> touched_tids;  // per touched period
    std::map<std::pair<std::size_t, ItemId>, CaseLabel> labels;
    std::map<std::pair<std::size_t, ItemId>, ItemShift> shifts;  // touched items only
    DeltaSets deltas;
    std::map<std::size_t, Rational> new_pttu;
    std::map<std::size_t, Rational> new_threshold;
};

struct PeriodState {
    PeriodTree tree;
    std::map<ItemId, ItemPeriodStat> items;        // every item occurring in the period
    std::map<Tid, std::vector<ItemId>> routed;     // current inserted path per tid
    std::vector<std::vector<ItemId>> cached_candidates;
    bool cache_valid = false;
};

// Retained database view, per-period trees, and bookkeeping binding a mining
// run to later refreshes. Single writer; reads are safe between refreshes.
struct EngineState {
    TemporalDatabase db;
    ProfitTable profits;
    MiningConfig config;
    std::vector<PeriodState> periods;
    MiningResult result;
    std::int64_t scan_counter = 0;  // cumulative full-period scans (builds + rescans)

    EngineState clone() const;
};

struct RefreshStats {
    std::int64_t rescan_count = 0;  // full-period rescans forced by Case 3
    std::int64_t phase2_scans = 0;
    std::array<std::int64_t, 4> case_histogram{0, 0, 0, 0};
    std::int64_t candidate_count = 0;
};

// Runs the full mining pass and captures the state a refresh needs.
EngineState make_engine(TemporalDatabase db, ProfitTable profits, MiningConfig config);

// Labels every affected (item, period) of the touched periods against the
// thresholds of the old and the modified view. Items occurring in a modified
// transaction always get a label; untouched items get one only when the
// moved threshold flips their status (the bar moves with pttu).
Classification classify_modified_items(const EngineState& state, const ModificationBatch& batch);

// Applies header twu adjustments, Case-2 splices, Case-3 tail appends plus
// the per-period rescan they force, and re-routes every modified transaction
// by exact detach/insert. Trees end up consistent with the modified view.
void update_trees(EngineState& state, Classification classification, RefreshStats* stats);

// classify -> update_trees -> re-mine touched periods (cached candidates are
// reused elsewhere) -> Phase-2 evaluation over the modified database.
// The returned entries equal a from-scratch mine of the modified database.
MiningResult refresh_houin(EngineState& state, const ModificationBatch& batch,
                           RefreshStats* stats = nullptr);

}  // namespace houin
