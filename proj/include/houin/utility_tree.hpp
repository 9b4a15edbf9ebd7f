#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "houin/temporal_db.hpp"
#include "houin/types.hpp"

namespace houin {

// Per-item mass of one period on one database view.
struct ItemPeriodStat {
    std::int64_t occurrences = 0;  // transactions of the period containing the item
    Rational twu;                  // sum of tu over those transactions
};

struct PeriodProfile {
    Rational pttu;
    std::map<ItemId, ItemPeriodStat> items;
};

PeriodProfile compute_period_profile(const TemporalDatabase& db, std::size_t period,
                                     const ProfitTable& profits);

// Prefix tree over one period's transactions, each filtered to header items
// and sorted by header position. Nodes carry the number of routed
// transactions, their summed transaction utility (twu mass), and the summed
// signed utility of the node's own item. A header table threads same-item
// node chains for conditional projection. Single writer; independent trees
// may be used in parallel.
class PeriodTree {
public:
    struct Node {
        ItemId item = 0;  // 0 only for the root
        std::int64_t count = 0;
        Rational twu_sum;
        Rational util_sum;
        Node* parent = nullptr;
        std::vector<std::unique_ptr<Node>> children;
        Node* next_same_item = nullptr;
    };

    struct HeaderEntry {
        ItemId item = 0;
        Rational twu;
        Node* link = nullptr;  // chain head, insertion order
    };

    struct PrefixPath {
        std::vector<ItemId> items;  // root-to-parent labels
        std::int64_t count = 0;
        Rational twu_sum;
    };

    using OrderedItems = std::vector<std::pair<ItemId, Rational>>;  // (item, utility)

    PeriodTree(std::size_t period, Rational pttu, Rational threshold,
               std::vector<std::pair<ItemId, Rational>> header_items_in_order);

    PeriodTree(PeriodTree&&) noexcept = default;
    PeriodTree& operator=(PeriodTree&&) noexcept = default;
    PeriodTree(const PeriodTree&) = delete;
    PeriodTree& operator=(const PeriodTree&) = delete;

    // Header = items of the period with twu >= lambda * pttu, non-negative
    // profits first, each group sorted by twu descending then item id
    // ascending. Every transaction is filtered, sorted, and inserted.
    static PeriodTree build(const TemporalDatabase& db, std::size_t period,
                            const ProfitTable& profits, const MiningConfig& config);

    std::size_t period_index() const { return period_; }
    const Rational& pttu() const { return pttu_; }
    const Rational& threshold() const { return threshold_; }
    void set_mass(Rational pttu, Rational threshold);

    const std::vector<HeaderEntry>& header() const { return header_; }
    bool in_header(ItemId item) const { return header_pos_.count(item) != 0; }
    std::size_t header_position(ItemId item) const;  // missing -> AbsentItemError
    void adjust_header_twu(ItemId item, const Rational& delta);

    // Keeps header items only, ordered by header position, paired with the
    // item's utility in the transaction.
    OrderedItems sort_transaction_items(const TemporalTransaction& tr,
                                        const ProfitTable& profits) const;
    // Item ids of sort_transaction_items, used as the stored routed path.
    std::vector<ItemId> path_items(const TemporalTransaction& tr) const;

    // Walks/extends the root path, adding one transaction's mass at each
    // visited node. `ordered` must strictly ascend in header position.
    void insert_path(std::span<const std::pair<ItemId, Rational>> ordered, const Rational& tu);

    // Exact inverse of insert_path for a path that exists; nodes reaching
    // count 0 are pruned and unlinked. A missing path or underflow signals
    // corrupted maintenance state.
    void detach_transaction(std::span<const std::pair<ItemId, Rational>> ordered,
                            const Rational& tu);

    // Prefix paths (with masses) above each node of the item's chain.
    std::vector<PrefixPath> conditional_pattern_base(ItemId item) const;

    // Splices out every node of the item, re-attaching children to the
    // parent and merging equal-label siblings; drops the header entry.
    void remove_header_item(ItemId item);

    // Appends new entries after all existing ones, sorted among themselves
    // by twu descending then id ascending. Paths are not retrofitted here.
    void append_header_items(std::vector<std::pair<ItemId, Rational>> items_with_twu);

    const Node* root() const { return root_.get(); }
    const Node* chain_head(ItemId item) const;
    std::size_t node_count() const;  // non-root nodes

    // Canonical text: header block, root line, then pre-order node lines
    // `depth item count twu_sum util_sum` with children ordered by header
    // position. Byte-equal snapshots identify isomorphic trees.
    std::string snapshot(const ItemCatalog& catalog) const;

    // Inverse of snapshot() for one tree section; `lines` holds the section
    // body starting at its "header <n>" line.
    static PeriodTree parse_snapshot(std::size_t period, Rational pttu, Rational threshold,
                                     const std::vector<std::string>& lines,
                                     const ItemCatalog& catalog);

    PeriodTree clone() const;

private:
    Node* find_child(Node* parent, ItemId item) const;
    void link_node(Node* node);
    void unlink_node(Node* node);
    void merge_child_into(Node* parent, std::unique_ptr<Node> child);
    void validate_order(std::span<const std::pair<ItemId, Rational>> ordered) const;

    std::size_t period_ = 0;
    Rational pttu_;
    Rational threshold_;
    std::unique_ptr<Node> root_;
    std::vector<HeaderEntry> header_;
    std::map<ItemId, std::size_t> header_pos_;
    std::map<ItemId, Node*> chain_tail_;
};

}  // namespace houin
