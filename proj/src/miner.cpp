#include "houin/miner.hpp"

#include <algorithm>
#include <map>

#include "houin/measures.hpp"

namespace houin {

namespace {

struct ProjectedPath {
    std::vector<std::size_t> positions;  // header positions, ascending
    Rational mass;                       // twu of the transactions behind this path
};

// Recursive conditional projection. Each path's mass is the exact twu of the
// transactions whose route carries the current suffix, so per-item mass sums
// are exact itemset twus and the threshold test needs no slack.
void grow(const std::vector<ProjectedPath>& paths, std::vector<std::size_t>& suffix,
          const PeriodTree& tree, std::size_t max_size,
          std::vector<std::vector<std::size_t>>& out) {
    if (max_size != 0 && suffix.size() >= max_size) return;

    std::map<std::size_t, Rational> mass_by_pos;
    for (const auto& path : paths) {
        for (std::size_t pos : path.positions) mass_by_pos[pos] += path.mass;
    }
    for (auto it = mass_by_pos.rbegin(); it != mass_by_pos.rend(); ++it) {
        const auto [pos, mass] = *it;
        if (mass < tree.threshold()) continue;
        suffix.push_back(pos);
        out.push_back(suffix);

        std::vector<ProjectedPath> projected;
        for (const auto& path : paths) {
            auto hit = std::lower_bound(path.positions.begin(), path.positions.end(), pos);
            if (hit == path.positions.end() || *hit != pos) continue;
            ProjectedPath p;
            p.positions.assign(path.positions.begin(), hit);
            p.mass = path.mass;
            if (!p.positions.empty()) projected.push_back(std::move(p));
        }
        if (!projected.empty()) grow(projected, suffix, tree, max_size, out);
        suffix.pop_back();
    }
}

}  // namespace

std::vector<ItemId> high_twu_items(const TemporalDatabase& db, std::size_t period,
                                   const ProfitTable& profits, const MiningConfig& config) {
    PeriodTree tree = PeriodTree::build(db, period, profits, config);
    std::vector<ItemId> out;
    out.reserve(tree.header().size());
    for (const auto& entry : tree.header()) out.push_back(entry.item);
    return out;
}

std::vector<std::vector<ItemId>> mine_period_candidates(const PeriodTree& tree,
                                                        std::size_t max_size) {
    std::vector<std::vector<std::size_t>> found;
    for (std::size_t idx = tree.header().size(); idx-- > 0;) {
        const auto& entry = tree.header()[idx];
        Rational chain_twu;
        for (const PeriodTree::Node* n = tree.chain_head(entry.item); n != nullptr;
             n = n->next_same_item) {
            chain_twu += n->twu_sum;
        }
        if (chain_twu < tree.threshold()) continue;
        std::vector<std::size_t> suffix{idx};
        found.push_back(suffix);
        if (max_size == 1) continue;

        std::vector<ProjectedPath> paths;
        for (const auto& base : tree.conditional_pattern_base(entry.item)) {
            if (base.items.empty()) continue;
            ProjectedPath p;
            p.positions.reserve(base.items.size());
            for (ItemId i : base.items) p.positions.push_back(tree.header_position(i));
            p.mass = base.twu_sum;
            paths.push_back(std::move(p));
        }
        if (!paths.empty()) grow(paths, suffix, tree, max_size, found);
    }

    std::vector<std::vector<ItemId>> out;
    out.reserve(found.size());
    for (const auto& positions : found) {
        std::vector<ItemId> items;
        items.reserve(positions.size());
        for (std::size_t pos : positions) items.push_back(tree.header()[pos].item);
        std::sort(items.begin(), items.end());
        out.push_back(std::move(items));
    }
    std::sort(out.begin(), out.end());
    return out;
}

MiningResult evaluate_candidates(const std::vector<Candidate>& candidates,
                                 const TemporalDatabase& db, const ProfitTable& profits,
                                 const MiningConfig& config) {
    MiningResult result;
    result.stats.db_scan_count = 1;  // the single Phase-2 pass below
    result.stats.candidate_count = static_cast<std::int64_t>(candidates.size());

    std::vector<Rational> pttu_by_period(db.period_count() + 1);
    std::map<ItemId, std::set<std::size_t>> item_shelf;
    std::vector<std::map<std::size_t, Rational>> pu(candidates.size());

    for (std::size_t p = 1; p <= db.period_count(); ++p) {
        for (const auto& tr : db.period(p)) {
            Rational tu = transaction_utility(tr, profits);
            pttu_by_period[p] += tu;
            for (const auto& [item, qty] : tr.items) {
                (void)qty;
                item_shelf[item].insert(p);
            }
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                const auto& items = candidates[c].items;
                bool all = true;
                Rational util;
                for (ItemId i : items) {
                    std::int64_t qty = tr.quantity(i);
                    if (qty == 0) {
                        all = false;
                        break;
                    }
                    util += profits.profit(i) * Rational(qty);
                }
                if (all) pu[c][p] += util;
            }
        }
    }

    for (std::size_t c = 0; c < candidates.size(); ++c) {
        std::set<std::size_t> shelf;
        for (ItemId i : candidates[c].items) {
            auto it = item_shelf.find(i);
            if (it != item_shelf.end()) shelf.insert(it->second.begin(), it->second.end());
        }
        if (shelf.empty()) continue;
        Rational denom;
        for (std::size_t p : shelf) denom += pttu_by_period[p];
        if (denom.is_zero()) continue;
        Rational ou;
        for (const auto& [p, u] : pu[c]) {
            (void)p;
            ou += u;
        }
        Rational osur = ou / denom;
        if (osur >= config.min_util_ratio) {
            result.houin.push_back(HouinEntry{candidates[c].items, std::move(shelf),
                                              std::move(ou), std::move(osur)});
        }
    }

    std::sort(result.houin.begin(), result.houin.end(),
              [](const HouinEntry& a, const HouinEntry& b) { return a.items < b.items; });
    return result;
}

MineOutput mine_houin(const TemporalDatabase& db, const ProfitTable& profits,
                      const MiningConfig& config) {
    config.validate();

    MineOutput out;
    std::map<std::vector<ItemId>, std::set<std::size_t>> high;
    for (std::size_t p = 1; p <= db.period_count(); ++p) {
        PeriodTree tree = PeriodTree::build(db, p, profits, config);
        for (auto& itemset : mine_period_candidates(tree, config.max_itemset_size)) {
            high[std::move(itemset)].insert(p);
        }
        out.trees.push_back(std::move(tree));
    }

    std::vector<Candidate> candidates;
    candidates.reserve(high.size());
    for (auto& [items, periods] : high) {
        candidates.push_back(Candidate{items, periods});
    }

    out.result = evaluate_candidates(candidates, db, profits, config);
    // One build pass per period plus the Phase-2 pass.
    out.result.stats.db_scan_count = static_cast<std::int64_t>(db.period_count()) + 1;
    out.result.stats.candidate_count = static_cast<std::int64_t>(candidates.size());
    for (const auto& tree : out.trees) {
        out.result.stats.tree_node_count += static_cast<std::int64_t>(tree.node_count());
    }
    return out;
}

std::string serialize_result(const MiningResult& result, const ItemCatalog& catalog) {
    std::string out = "items\tosp\tou\tosur\n";
    for (const auto& entry : result.houin) {
        std::string items;
        for (std::size_t i = 0; i < entry.items.size(); ++i) {
            if (i) items += ',';
            items += catalog.name(entry.items[i]);
        }
        std::string osp;
        bool first = true;
        for (std::size_t p : entry.osp) {
            if (!first) osp += ',';
            osp += std::to_string(p);
            first = false;
        }
        out += items + "\t" + osp + "\t" + entry.ou.str() + "\t" + entry.osur.fraction_str() +
               "\n";
    }
    return out;
}

bool same_houin(const MiningResult& a, const MiningResult& b) {
    return a.houin == b.houin;
}

}  // namespace houin
