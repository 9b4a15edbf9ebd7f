#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "houin/rational.hpp"

namespace houin {

using ItemId = std::int32_t;  // dense ids starting at 1, assigned in first-appearance order
using Tid = std::int64_t;

// Items of one transaction: (item, quantity) sorted by item id, quantities > 0.
using ItemQuantities = std::vector<std::pair<ItemId, std::int64_t>>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class DuplicateEntryError : public Error {
public:
    using Error::Error;
};

class MissingTransactionError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

class AbsentItemError : public Error {
public:
    using Error::Error;
};

class ContractError : public Error {
public:
    using Error::Error;
};

class InconsistencyError : public Error {
public:
    using Error::Error;
};

class UndefinedRatioError : public Error {
public:
    using Error::Error;
};

class SizeGuardError : public Error {
public:
    using Error::Error;
};

class FingerprintMismatchError : public Error {
public:
    using Error::Error;
};

// Bidirectional item-name registry. Ids are dense and assigned in the order
// names are first seen, so parsing the same files twice yields the same ids.
class ItemCatalog {
public:
    ItemId intern(const std::string& name);
    std::optional<ItemId> find(const std::string& name) const;
    const std::string& name(ItemId id) const;
    std::size_t size() const { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::map<std::string, ItemId> ids_;
};

// Signed per-unit profit for every item. Items without an entry are unknown
// to the dataset; lookups on them throw.
class ProfitTable {
public:
    void set(ItemId item, const Rational& profit);  // duplicate -> DuplicateEntryError
    bool contains(ItemId item) const { return profits_.count(item) != 0; }
    const Rational& profit(ItemId item) const;  // absent -> AbsentItemError
    std::size_t size() const { return profits_.size(); }
    const std::map<ItemId, Rational>& entries() const { return profits_; }

private:
    std::map<ItemId, Rational> profits_;
};

struct TemporalTransaction {
    Tid tid = 0;
    std::int64_t time = 0;
    ItemQuantities items;  // sorted by item id

    bool contains(ItemId item) const;
    std::int64_t quantity(ItemId item) const;  // 0 when absent

    friend bool operator==(const TemporalTransaction&, const TemporalTransaction&) = default;
};

// Whole-map replacements for existing transactions, keyed by tid.
class ModificationBatch {
public:
    void add(Tid tid, ItemQuantities items);  // duplicate tid -> DuplicateEntryError
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const std::map<Tid, ItemQuantities>& entries() const { return entries_; }

private:
    std::map<Tid, ItemQuantities> entries_;
};

struct MiningConfig {
    Rational min_util_ratio;           // lambda in (0, 1]
    std::size_t max_itemset_size = 0;  // 0 = unbounded

    void validate() const {
        if (!(min_util_ratio > Rational(0)) || min_util_ratio > Rational(1)) {
            throw RangeError("min utility ratio must be in (0, 1], got " +
                             min_util_ratio.fraction_str());
        }
    }
};

// Normalizes a raw (item, qty) list: sorts by id, rejects non-positive
// quantities and repeated items.
ItemQuantities normalize_items(std::vector<std::pair<ItemId, std::int64_t>> raw);

}  // namespace houin
