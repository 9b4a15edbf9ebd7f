#include "houin/utility_tree.hpp"

#include <algorithm>
#include <sstream>

#include "houin/measures.hpp"

namespace houin {

PeriodProfile compute_period_profile(const TemporalDatabase& db, std::size_t period,
                                     const ProfitTable& profits) {
    PeriodProfile profile;
    for (const auto& tr : db.period(period)) {
        Rational tu = transaction_utility(tr, profits);
        profile.pttu += tu;
        for (const auto& [item, qty] : tr.items) {
            (void)qty;
            auto& stat = profile.items[item];
            stat.occurrences += 1;
            stat.twu += tu;
        }
    }
    return profile;
}

PeriodTree::PeriodTree(std::size_t period, Rational pttu, Rational threshold,
                       std::vector<std::pair<ItemId, Rational>> header_items_in_order)
    : period_(period),
      pttu_(std::move(pttu)),
      threshold_(std::move(threshold)),
      root_(std::make_unique<Node>()) {
    header_.reserve(header_items_in_order.size());
    for (auto& [item, twu] : header_items_in_order) {
        if (header_pos_.count(item)) {
            throw DuplicateEntryError("item id " + std::to_string(item) +
                                      " repeated in header");
        }
        header_pos_.emplace(item, header_.size());
        header_.push_back(HeaderEntry{item, std::move(twu), nullptr});
    }
}

PeriodTree PeriodTree::build(const TemporalDatabase& db, std::size_t period,
                             const ProfitTable& profits, const MiningConfig& config) {
    PeriodProfile profile = compute_period_profile(db, period, profits);
    Rational threshold = config.min_util_ratio * profile.pttu;

    std::vector<std::pair<ItemId, Rational>> nonneg, neg;
    for (const auto& [item, stat] : profile.items) {
        if (stat.twu < threshold) continue;
        if (profits.profit(item).is_negative()) {
            neg.emplace_back(item, stat.twu);
        } else {
            nonneg.emplace_back(item, stat.twu);
        }
    }
    auto by_twu_desc_id_asc = [](const auto& a, const auto& b) {
        if (a.second != b.second) return b.second < a.second;
        return a.first < b.first;
    };
    std::sort(nonneg.begin(), nonneg.end(), by_twu_desc_id_asc);
    std::sort(neg.begin(), neg.end(), by_twu_desc_id_asc);
    nonneg.insert(nonneg.end(), neg.begin(), neg.end());

    PeriodTree tree(period, profile.pttu, std::move(threshold), std::move(nonneg));
    for (const auto& tr : db.period(period)) {
        auto ordered = tree.sort_transaction_items(tr, profits);
        tree.insert_path(ordered, transaction_utility(tr, profits));
    }
    return tree;
}

void PeriodTree::set_mass(Rational pttu, Rational threshold) {
    pttu_ = std::move(pttu);
    threshold_ = std::move(threshold);
}

std::size_t PeriodTree::header_position(ItemId item) const {
    auto it = header_pos_.find(item);
    if (it == header_pos_.end()) {
        throw AbsentItemError("item id " + std::to_string(item) + " not in header");
    }
    return it->second;
}

void PeriodTree::adjust_header_twu(ItemId item, const Rational& delta) {
    header_[header_position(item)].twu += delta;
}

PeriodTree::OrderedItems PeriodTree::sort_transaction_items(const TemporalTransaction& tr,
                                                            const ProfitTable& profits) const {
    std::vector<std::pair<std::size_t, ItemId>> kept;
    for (const auto& [item, qty] : tr.items) {
        (void)qty;
        auto it = header_pos_.find(item);
        if (it != header_pos_.end()) kept.emplace_back(it->second, item);
    }
    std::sort(kept.begin(), kept.end());
    OrderedItems out;
    out.reserve(kept.size());
    for (const auto& [pos, item] : kept) {
        (void)pos;
        out.emplace_back(item, profits.profit(item) * Rational(tr.quantity(item)));
    }
    return out;
}

std::vector<ItemId> PeriodTree::path_items(const TemporalTransaction& tr) const {
    std::vector<std::pair<std::size_t, ItemId>> kept;
    for (const auto& [item, qty] : tr.items) {
        (void)qty;
        auto it = header_pos_.find(item);
        if (it != header_pos_.end()) kept.emplace_back(it->second, item);
    }
    std::sort(kept.begin(), kept.end());
    std::vector<ItemId> out;
    out.reserve(kept.size());
    for (const auto& [pos, item] : kept) {
        (void)pos;
        out.push_back(item);
    }
    return out;
}

void PeriodTree::validate_order(std::span<const std::pair<ItemId, Rational>> ordered) const {
    std::size_t prev = 0;
    bool first = true;
    for (const auto& [item, util] : ordered) {
        (void)util;
        auto it = header_pos_.find(item);
        if (it == header_pos_.end()) {
            throw ContractError("path item id " + std::to_string(item) + " not in header");
        }
        if (!first && it->second <= prev) {
            throw ContractError("path does not respect header order");
        }
        prev = it->second;
        first = false;
    }
}

PeriodTree::Node* PeriodTree::find_child(Node* parent, ItemId item) const {
    for (const auto& c : parent->children) {
        if (c->item == item) return c.get();
    }
    return nullptr;
}

void PeriodTree::link_node(Node* node) {
    auto tail = chain_tail_.find(node->item);
    if (tail == chain_tail_.end() || tail->second == nullptr) {
        header_[header_position(node->item)].link = node;
        chain_tail_[node->item] = node;
    } else {
        tail->second->next_same_item = node;
        tail->second = node;
    }
}

void PeriodTree::unlink_node(Node* node) {
    auto& entry = header_[header_position(node->item)];
    Node* prev = nullptr;
    Node* cur = entry.link;
    while (cur != nullptr && cur != node) {
        prev = cur;
        cur = cur->next_same_item;
    }
    if (cur == nullptr) {
        throw InconsistencyError("node missing from its chain");
    }
    if (prev == nullptr) {
        entry.link = node->next_same_item;
    } else {
        prev->next_same_item = node->next_same_item;
    }
    auto tail = chain_tail_.find(node->item);
    if (tail != chain_tail_.end() && tail->second == node) {
        tail->second = prev;
    }
    node->next_same_item = nullptr;
}

void PeriodTree::insert_path(std::span<const std::pair<ItemId, Rational>> ordered,
                             const Rational& tu) {
    validate_order(ordered);
    root_->count += 1;
    root_->twu_sum += tu;
    Node* cur = root_.get();
    for (const auto& [item, util] : ordered) {
        Node* child = find_child(cur, item);
        if (child == nullptr) {
            auto owned = std::make_unique<Node>();
            child = owned.get();
            child->item = item;
            child->parent = cur;
            cur->children.push_back(std::move(owned));
            link_node(child);
        }
        child->count += 1;
        child->twu_sum += tu;
        child->util_sum += util;
        cur = child;
    }
}

void PeriodTree::detach_transaction(std::span<const std::pair<ItemId, Rational>> ordered,
                                    const Rational& tu) {
    std::vector<Node*> path;
    Node* cur = root_.get();
    for (const auto& [item, util] : ordered) {
        (void)util;
        Node* child = find_child(cur, item);
        if (child == nullptr || child->count < 1) {
            throw InconsistencyError("detach path not present in tree");
        }
        path.push_back(child);
        cur = child;
    }
    if (root_->count < 1) {
        throw InconsistencyError("detach underflows root count");
    }
    root_->count -= 1;
    root_->twu_sum -= tu;
    for (std::size_t i = 0; i < path.size(); ++i) {
        path[i]->count -= 1;
        path[i]->twu_sum -= tu;
        path[i]->util_sum -= ordered[i].second;
    }
    for (std::size_t i = path.size(); i-- > 0;) {
        Node* node = path[i];
        if (node->count > 0) continue;
        if (!node->children.empty()) {
            throw InconsistencyError("pruned node still has children");
        }
        unlink_node(node);
        Node* parent = node->parent;
        auto it = std::find_if(parent->children.begin(), parent->children.end(),
                               [&](const auto& c) { return c.get() == node; });
        parent->children.erase(it);
    }
}

std::vector<PeriodTree::PrefixPath> PeriodTree::conditional_pattern_base(ItemId item) const {
    std::size_t pos = header_position(item);
    std::vector<PrefixPath> out;
    for (const Node* node = header_[pos].link; node != nullptr; node = node->next_same_item) {
        PrefixPath path;
        path.count = node->count;
        path.twu_sum = node->twu_sum;
        for (const Node* up = node->parent; up != nullptr && up->item != 0; up = up->parent) {
            path.items.push_back(up->item);
        }
        std::reverse(path.items.begin(), path.items.end());
        out.push_back(std::move(path));
    }
    return out;
}

void PeriodTree::merge_child_into(Node* parent, std::unique_ptr<Node> child) {
    Node* existing = find_child(parent, child->item);
    if (existing == nullptr) {
        child->parent = parent;
        parent->children.push_back(std::move(child));
        return;
    }
    existing->count += child->count;
    existing->twu_sum += child->twu_sum;
    existing->util_sum += child->util_sum;
    unlink_node(child.get());
    auto grandchildren = std::move(child->children);
    child.reset();
    for (auto& gc : grandchildren) {
        merge_child_into(existing, std::move(gc));
    }
}

void PeriodTree::remove_header_item(ItemId item) {
    std::size_t pos = header_position(item);

    std::vector<Node*> nodes;
    for (Node* n = header_[pos].link; n != nullptr; n = n->next_same_item) {
        nodes.push_back(n);
    }
    for (Node* node : nodes) {
        Node* parent = node->parent;
        auto it = std::find_if(parent->children.begin(), parent->children.end(),
                               [&](const auto& c) { return c.get() == node; });
        std::unique_ptr<Node> owned = std::move(*it);
        parent->children.erase(it);
        auto orphans = std::move(owned->children);
        owned.reset();
        for (auto& orphan : orphans) {
            merge_child_into(parent, std::move(orphan));
        }
    }

    header_.erase(header_.begin() + static_cast<std::ptrdiff_t>(pos));
    header_pos_.clear();
    for (std::size_t i = 0; i < header_.size(); ++i) {
        header_pos_.emplace(header_[i].item, i);
    }
    chain_tail_.erase(item);
}

void PeriodTree::append_header_items(std::vector<std::pair<ItemId, Rational>> items_with_twu) {
    for (const auto& [item, twu] : items_with_twu) {
        (void)twu;
        if (header_pos_.count(item)) {
            throw DuplicateEntryError("item id " + std::to_string(item) +
                                      " already in header");
        }
    }
    std::sort(items_with_twu.begin(), items_with_twu.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return b.second < a.second;
        return a.first < b.first;
    });
    for (auto& [item, twu] : items_with_twu) {
        header_pos_.emplace(item, header_.size());
        header_.push_back(HeaderEntry{item, std::move(twu), nullptr});
    }
}

const PeriodTree::Node* PeriodTree::chain_head(ItemId item) const {
    return header_[header_position(item)].link;
}

std::size_t PeriodTree::node_count() const {
    std::size_t n = 0;
    std::vector<const Node*> stack{root_.get()};
    while (!stack.empty()) {
        const Node* cur = stack.back();
        stack.pop_back();
        for (const auto& c : cur->children) {
            ++n;
            stack.push_back(c.get());
        }
    }
    return n;
}

std::string PeriodTree::snapshot(const ItemCatalog& catalog) const {
    std::string out;
    out += "header " + std::to_string(header_.size()) + "\n";
    for (const auto& entry : header_) {
        out += catalog.name(entry.item) + " " + entry.twu.fraction_str() + "\n";
    }
    out += "root " + std::to_string(root_->count) + " " + root_->twu_sum.fraction_str() + "\n";

    std::string body;
    std::size_t nodes = 0;
    // Children serialized in header-position order so isomorphic trees give
    // byte-identical snapshots.
    auto emit = [&](auto&& self, const Node* node, std::size_t depth) -> void {
        std::vector<const Node*> kids;
        for (const auto& c : node->children) kids.push_back(c.get());
        std::sort(kids.begin(), kids.end(), [&](const Node* a, const Node* b) {
            return header_pos_.at(a->item) < header_pos_.at(b->item);
        });
        for (const Node* kid : kids) {
            ++nodes;
            body += std::to_string(depth) + " " + catalog.name(kid->item) + " " +
                    std::to_string(kid->count) + " " + kid->twu_sum.fraction_str() + " " +
                    kid->util_sum.fraction_str() + "\n";
            self(self, kid, depth + 1);
        }
    };
    emit(emit, root_.get(), 1);
    out += "nodes " + std::to_string(nodes) + "\n";
    out += body;
    return out;
}

PeriodTree PeriodTree::parse_snapshot(std::size_t period, Rational pttu, Rational threshold,
                                      const std::vector<std::string>& lines,
                                      const ItemCatalog& catalog) {
    std::size_t at = 0;
    auto need = [&](const std::string& what) -> std::vector<std::string> {
        if (at >= lines.size()) throw ParseError("tree section truncated at " + what, at);
        std::istringstream ss(lines[at]);
        std::vector<std::string> toks;
        std::string t;
        while (ss >> t) toks.push_back(t);
        ++at;
        return toks;
    };
    auto item_of = [&](const std::string& name) -> ItemId {
        auto id = catalog.find(name);
        if (!id) throw ParseError("tree references unknown item '" + name + "'", at);
        return *id;
    };

    auto head = need("header");
    if (head.size() != 2 || head[0] != "header") throw ParseError("expected header line", at);
    std::size_t header_n = std::stoull(head[1]);
    std::vector<std::pair<ItemId, Rational>> header_spec;
    for (std::size_t i = 0; i < header_n; ++i) {
        auto toks = need("header entry");
        if (toks.size() != 2) throw ParseError("bad header entry", at);
        header_spec.emplace_back(item_of(toks[0]), parse_rational(toks[1]));
    }
    PeriodTree tree(period, std::move(pttu), std::move(threshold), std::move(header_spec));

    auto root_toks = need("root");
    if (root_toks.size() != 3 || root_toks[0] != "root") throw ParseError("expected root line", at);
    tree.root_->count = std::stoll(root_toks[1]);
    tree.root_->twu_sum = parse_rational(root_toks[2]);

    auto nodes_toks = need("nodes");
    if (nodes_toks.size() != 2 || nodes_toks[0] != "nodes") {
        throw ParseError("expected nodes line", at);
    }
    std::size_t node_n = std::stoull(nodes_toks[1]);

    std::vector<Node*> stack{tree.root_.get()};  // stack[d] = current node at depth d
    for (std::size_t i = 0; i < node_n; ++i) {
        auto toks = need("node");
        if (toks.size() != 5) throw ParseError("bad node line", at);
        std::size_t depth = std::stoull(toks[0]);
        if (depth < 1 || depth > stack.size()) throw ParseError("bad node depth", at);
        stack.resize(depth);

        auto owned = std::make_unique<Node>();
        Node* node = owned.get();
        node->item = item_of(toks[1]);
        node->count = std::stoll(toks[2]);
        node->twu_sum = parse_rational(toks[3]);
        node->util_sum = parse_rational(toks[4]);
        node->parent = stack.back();
        stack.back()->children.push_back(std::move(owned));
        tree.link_node(node);
        stack.push_back(node);
    }
    return tree;
}

PeriodTree PeriodTree::clone() const {
    std::vector<std::pair<ItemId, Rational>> header_spec;
    header_spec.reserve(header_.size());
    for (const auto& e : header_) header_spec.emplace_back(e.item, e.twu);
    PeriodTree out(period_, pttu_, threshold_, std::move(header_spec));

    std::map<const Node*, Node*> mapping;
    mapping[root_.get()] = out.root_.get();
    std::vector<const Node*> stack{root_.get()};
    while (!stack.empty()) {
        const Node* cur = stack.back();
        stack.pop_back();
        Node* copy = mapping[cur];
        copy->count = cur->count;
        copy->twu_sum = cur->twu_sum;
        copy->util_sum = cur->util_sum;
        for (const auto& c : cur->children) {
            auto owned = std::make_unique<Node>();
            owned->item = c->item;
            owned->parent = copy;
            mapping[c.get()] = owned.get();
            copy->children.push_back(std::move(owned));
            stack.push_back(c.get());
        }
    }
    // Re-thread chains in the original chain order.
    for (const auto& entry : header_) {
        for (const Node* n = entry.link; n != nullptr; n = n->next_same_item) {
            out.link_node(mapping.at(n));
        }
    }
    return out;
}

}  // namespace houin
