#include "houin/types.hpp"

#include <algorithm>

namespace houin {

ItemId ItemCatalog::intern(const std::string& name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    names_.push_back(name);
    ItemId id = static_cast<ItemId>(names_.size());
    ids_.emplace(name, id);
    return id;
}

std::optional<ItemId> ItemCatalog::find(const std::string& name) const {
    auto it = ids_.find(name);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

const std::string& ItemCatalog::name(ItemId id) const {
    if (id < 1 || static_cast<std::size_t>(id) > names_.size()) {
        throw AbsentItemError("unknown item id " + std::to_string(id));
    }
    return names_[static_cast<std::size_t>(id) - 1];
}

void ProfitTable::set(ItemId item, const Rational& profit) {
    auto [it, inserted] = profits_.emplace(item, profit);
    if (!inserted) {
        throw DuplicateEntryError("duplicate profit entry for item id " + std::to_string(item));
    }
}

const Rational& ProfitTable::profit(ItemId item) const {
    auto it = profits_.find(item);
    if (it == profits_.end()) {
        throw AbsentItemError("no profit entry for item id " + std::to_string(item));
    }
    return it->second;
}

bool TemporalTransaction::contains(ItemId item) const {
    auto it = std::lower_bound(items.begin(), items.end(), item,
                               [](const auto& p, ItemId v) { return p.first < v; });
    return it != items.end() && it->first == item;
}

std::int64_t TemporalTransaction::quantity(ItemId item) const {
    auto it = std::lower_bound(items.begin(), items.end(), item,
                               [](const auto& p, ItemId v) { return p.first < v; });
    return (it != items.end() && it->first == item) ? it->second : 0;
}

void ModificationBatch::add(Tid tid, ItemQuantities items) {
    if (items.empty()) {
        throw RangeError("replacement for tid " + std::to_string(tid) + " is empty");
    }
    items = normalize_items(std::move(items));
    auto [it, inserted] = entries_.emplace(tid, std::move(items));
    if (!inserted) {
        throw DuplicateEntryError("tid " + std::to_string(tid) + " named twice in batch");
    }
}

ItemQuantities normalize_items(std::vector<std::pair<ItemId, std::int64_t>> raw) {
    std::sort(raw.begin(), raw.end());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i].second <= 0) {
            throw RangeError("non-positive quantity for item id " +
                             std::to_string(raw[i].first));
        }
        if (i > 0 && raw[i].first == raw[i - 1].first) {
            throw DuplicateEntryError("item id " + std::to_string(raw[i].first) +
                                      " repeated in one transaction");
        }
    }
    return raw;
}

}  // namespace houin
