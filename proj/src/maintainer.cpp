#include "houin/maintainer.hpp"

#include <algorithm>

#include "houin/measures.hpp"

namespace houin {

EngineState EngineState::clone() const {
    EngineState out;
    out.db = db;
    out.profits = profits;
    out.config = config;
    out.periods.reserve(periods.size());
    for (const auto& ps : periods) {
        out.periods.push_back(PeriodState{ps.tree.clone(), ps.items, ps.routed,
                                          ps.cached_candidates, ps.cache_valid});
    }
    out.result = result;
    out.scan_counter = scan_counter;
    return out;
}

EngineState make_engine(TemporalDatabase db, ProfitTable profits, MiningConfig config) {
    config.validate();
    EngineState state;
    state.db = std::move(db);
    state.profits = std::move(profits);
    state.config = config;

    std::map<std::vector<ItemId>, std::set<std::size_t>> high;
    for (std::size_t p = 1; p <= state.db.period_count(); ++p) {
        PeriodProfile profile = compute_period_profile(state.db, p, state.profits);
        PeriodTree tree = PeriodTree::build(state.db, p, state.profits, config);
        state.scan_counter += 1;

        PeriodState ps{std::move(tree), std::move(profile.items), {}, {}, false};
        for (const auto& tr : state.db.period(p)) {
            ps.routed.emplace(tr.tid, ps.tree.path_items(tr));
        }
        ps.cached_candidates = mine_period_candidates(ps.tree, config.max_itemset_size);
        ps.cache_valid = true;
        for (const auto& itemset : ps.cached_candidates) {
            high[itemset].insert(p);
        }
        state.periods.push_back(std::move(ps));
    }

    std::vector<Candidate> candidates;
    candidates.reserve(high.size());
    for (auto& [items, periods] : high) candidates.push_back(Candidate{items, periods});

    state.result = evaluate_candidates(candidates, state.db, state.profits, config);
    state.result.stats.db_scan_count =
        static_cast<std::int64_t>(state.db.period_count()) + 1;
    state.result.stats.candidate_count = static_cast<std::int64_t>(candidates.size());
    for (const auto& ps : state.periods) {
        state.result.stats.tree_node_count += static_cast<std::int64_t>(ps.tree.node_count());
    }
    return state;
}

Classification classify_modified_items(const EngineState& state,
                                       const ModificationBatch& batch) {
    for (const auto& [tid, items] : batch.entries()) {
        if (!state.db.has_tid(tid)) {
            throw MissingTransactionError("batch names unknown tid " + std::to_string(tid));
        }
        for (const auto& [item, qty] : items) {
            (void)qty;
            if (!state.profits.contains(item)) {
                throw AbsentItemError("item id " + std::to_string(item) +
                                      " has no profit entry");
            }
        }
    }

    Classification cls;
    cls.modified_db = apply_modifications(state.db, batch);

    std::map<std::size_t, std::vector<Tid>> touched;
    for (const auto& [tid, items] : batch.entries()) {
        (void)items;
        touched[state.db.period_of(tid)].push_back(tid);
    }

    for (const auto& [p, tids] : touched) {
        cls.touched_periods.insert(p);
        cls.touched_tids.emplace(p, tids);
        const PeriodState& ps = state.periods[p - 1];
        const Rational old_threshold = ps.tree.threshold();

        Rational pttu_delta;
        std::map<ItemId, ItemShift> shifts;
        for (Tid tid : tids) {
            const TemporalTransaction& before = state.db.transaction(tid);
            const TemporalTransaction& after = cls.modified_db.transaction(tid);
            Rational tu_before = transaction_utility(before, state.profits);
            Rational tu_after = transaction_utility(after, state.profits);
            pttu_delta += tu_after - tu_before;
            for (const auto& [item, qty] : before.items) {
                (void)qty;
                auto& s = shifts[item];
                s.twu_delta -= tu_before;
                s.occurrence_delta -= 1;
            }
            for (const auto& [item, qty] : after.items) {
                (void)qty;
                auto& s = shifts[item];
                s.twu_delta += tu_after;
                s.occurrence_delta += 1;
            }
        }

        Rational new_pttu = ps.tree.pttu() + pttu_delta;
        Rational new_threshold = state.config.min_util_ratio * new_pttu;
        cls.new_pttu.emplace(p, new_pttu);
        cls.new_threshold.emplace(p, new_threshold);

        for (const auto& [item, shift] : shifts) {
            ItemPeriodStat old_stat;
            if (auto it = ps.items.find(item); it != ps.items.end()) old_stat = it->second;
            const Rational new_twu = old_stat.twu + shift.twu_delta;
            const std::int64_t new_occ = old_stat.occurrences + shift.occurrence_delta;

            const bool high_before =
                old_stat.occurrences > 0 && old_stat.twu >= old_threshold;
            const bool high_after = new_occ > 0 && new_twu >= new_threshold;

            CaseLabel label;
            if (high_before && high_after) {
                label = CaseLabel::Case1;
                if (shift.twu_delta.is_positive()) {
                    cls.deltas.increase.push_back(DeltaEntry{item, p, shift.twu_delta, false});
                } else if (shift.twu_delta.is_negative()) {
                    cls.deltas.decrease.push_back(DeltaEntry{item, p, shift.twu_delta, false});
                }
            } else if (high_before && !high_after) {
                label = CaseLabel::Case2;
                cls.deltas.decrease.push_back(DeltaEntry{item, p, shift.twu_delta, true});
            } else if (!high_before && high_after) {
                label = CaseLabel::Case3;
                cls.deltas.rescan.emplace_back(item, p);
            } else {
                label = CaseLabel::Case4;
            }
            cls.labels.emplace(std::make_pair(p, item), label);
            cls.shifts.emplace(std::make_pair(p, item), shift);
        }

        // The bar moves with pttu, so an untouched item can flip status as
        // well; a flip needs the same header surgery as a touched Case 2/3.
        for (const auto& [item, stat] : ps.items) {
            if (shifts.count(item)) continue;
            const bool high_before = stat.twu >= old_threshold;
            const bool high_after = stat.twu >= new_threshold;
            if (high_before && !high_after) {
                cls.labels.emplace(std::make_pair(p, item), CaseLabel::Case2);
                cls.deltas.decrease.push_back(DeltaEntry{item, p, Rational(0), true});
            } else if (!high_before && high_after) {
                cls.labels.emplace(std::make_pair(p, item), CaseLabel::Case3);
                cls.deltas.rescan.emplace_back(item, p);
            }
        }
    }
    return cls;
}

void update_trees(EngineState& state, Classification cls, RefreshStats* stats) {
    for (std::size_t p : cls.touched_periods) {
        PeriodState& ps = state.periods[p - 1];

        // 1. Case-1 header adjustments plus per-item mass bookkeeping.
        for (const auto& entry : cls.deltas.increase) {
            if (entry.period != p) continue;
            if (!ps.tree.in_header(entry.item)) {
                throw InconsistencyError("increase entry for item absent from header");
            }
            ps.tree.adjust_header_twu(entry.item, entry.twu_delta);
        }
        for (const auto& entry : cls.deltas.decrease) {
            if (entry.period != p || entry.remove) continue;
            if (!ps.tree.in_header(entry.item)) {
                throw InconsistencyError("decrease entry for item absent from header");
            }
            ps.tree.adjust_header_twu(entry.item, entry.twu_delta);
        }
        for (const auto& [key, shift] : cls.shifts) {
            if (key.first != p) continue;
            auto& stat = ps.items[key.second];
            stat.twu += shift.twu_delta;
            stat.occurrences += shift.occurrence_delta;
            if (stat.occurrences == 0) ps.items.erase(key.second);
        }

        // 2. Case-2 splices; stored routes must mirror the tree.
        std::vector<ItemId> removed;
        for (const auto& entry : cls.deltas.decrease) {
            if (entry.period != p || !entry.remove) continue;
            if (!ps.tree.in_header(entry.item)) {
                throw InconsistencyError("removal entry for item absent from header");
            }
            ps.tree.remove_header_item(entry.item);
            removed.push_back(entry.item);
        }
        if (!removed.empty()) {
            for (auto& [tid, path] : ps.routed) {
                (void)tid;
                path.erase(std::remove_if(path.begin(), path.end(),
                                          [&](ItemId i) {
                                              return std::find(removed.begin(), removed.end(),
                                                               i) != removed.end();
                                          }),
                           path.end());
            }
        }

        // 3. Case-3 tail appends with current twu values.
        std::vector<std::pair<ItemId, Rational>> appended;
        std::vector<ItemId> rescan_items;
        for (const auto& [item, period] : cls.deltas.rescan) {
            if (period != p) continue;
            rescan_items.push_back(item);
            auto it = ps.items.find(item);
            appended.emplace_back(item, it != ps.items.end() ? it->second.twu : Rational(0));
        }
        if (!appended.empty()) ps.tree.append_header_items(std::move(appended));

        // 4. Re-route every modified transaction; a forced rescan widens the
        // set to every transaction now carrying a rescan item. Only the
        // rescan walks the whole period.
        std::set<Tid> reroute(cls.touched_tids.at(p).begin(), cls.touched_tids.at(p).end());
        if (!rescan_items.empty()) {
            state.scan_counter += 1;
            if (stats) stats->rescan_count += 1;
            for (const auto& tr : cls.modified_db.period(p)) {
                for (ItemId item : rescan_items) {
                    if (tr.contains(item)) {
                        reroute.insert(tr.tid);
                        break;
                    }
                }
            }
        }

        // 5. Exact detach of the old route, insert of the new one.
        for (Tid tid : reroute) {
            const TemporalTransaction& before = state.db.transaction(tid);
            const TemporalTransaction& after = cls.modified_db.transaction(tid);

            auto routed_it = ps.routed.find(tid);
            if (routed_it == ps.routed.end()) {
                throw InconsistencyError("no stored route for tid " + std::to_string(tid));
            }
            PeriodTree::OrderedItems old_path;
            old_path.reserve(routed_it->second.size());
            for (ItemId item : routed_it->second) {
                old_path.emplace_back(
                    item, state.profits.profit(item) * Rational(before.quantity(item)));
            }
            ps.tree.detach_transaction(old_path, transaction_utility(before, state.profits));

            auto new_path = ps.tree.sort_transaction_items(after, state.profits);
            ps.tree.insert_path(new_path, transaction_utility(after, state.profits));
            routed_it->second = ps.tree.path_items(after);
        }

        ps.tree.set_mass(cls.new_pttu.at(p), cls.new_threshold.at(p));
        ps.cache_valid = false;
    }

    state.db = std::move(cls.modified_db);
}

MiningResult refresh_houin(EngineState& state, const ModificationBatch& batch,
                           RefreshStats* stats) {
    RefreshStats local;
    if (stats == nullptr) stats = &local;
    *stats = RefreshStats{};

    Classification cls = classify_modified_items(state, batch);
    for (const auto& [key, label] : cls.labels) {
        (void)key;
        stats->case_histogram[static_cast<std::size_t>(label)] += 1;
    }
    update_trees(state, std::move(cls), stats);

    std::map<std::vector<ItemId>, std::set<std::size_t>> high;
    for (std::size_t p = 1; p <= state.db.period_count(); ++p) {
        PeriodState& ps = state.periods[p - 1];
        if (!ps.cache_valid) {
            ps.cached_candidates =
                mine_period_candidates(ps.tree, state.config.max_itemset_size);
            ps.cache_valid = true;
        }
        for (const auto& itemset : ps.cached_candidates) high[itemset].insert(p);
    }

    std::vector<Candidate> candidates;
    candidates.reserve(high.size());
    for (auto& [items, periods] : high) candidates.push_back(Candidate{items, periods});

    MiningResult result = evaluate_candidates(candidates, state.db, state.profits, state.config);
    stats->phase2_scans = 1;
    stats->candidate_count = static_cast<std::int64_t>(candidates.size());

    result.stats.db_scan_count = stats->rescan_count + stats->phase2_scans;
    result.stats.candidate_count = stats->candidate_count;
    for (const auto& ps : state.periods) {
        result.stats.tree_node_count += static_cast<std::int64_t>(ps.tree.node_count());
    }
    state.result = result;
    return result;
}

}  // namespace houin
