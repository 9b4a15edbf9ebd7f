#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "houin/types.hpp"

namespace houin {

// Transaction database partitioned into disjoint, ordered time periods.
// Period indices are 1-based throughout the public API. Immutable after
// construction; apply_modifications returns a fresh view.
class TemporalDatabase {
public:
    TemporalDatabase() = default;

    std::int64_t period_length() const { return period_length_; }
    std::size_t period_count() const { return periods_.size(); }
    const std::vector<TemporalTransaction>& period(std::size_t p) const;  // p in [1, k]
    std::size_t transaction_count() const;

    bool has_tid(Tid tid) const;
    const TemporalTransaction& transaction(Tid tid) const;  // missing -> MissingTransactionError
    std::size_t period_of(Tid tid) const;                   // 1-based

    friend bool operator==(const TemporalDatabase& a, const TemporalDatabase& b) {
        return a.period_length_ == b.period_length_ && a.periods_ == b.periods_;
    }

    friend TemporalDatabase assign_periods(std::vector<TemporalTransaction> transactions,
                                           std::int64_t period_length);
    friend TemporalDatabase apply_modifications(const TemporalDatabase& db,
                                                const ModificationBatch& batch);

private:
    void rebuild_index();

    std::int64_t period_length_ = 1;
    std::vector<std::vector<TemporalTransaction>> periods_;   // [0] is period 1
    std::map<Tid, std::pair<std::size_t, std::size_t>> index_;  // tid -> (period idx, pos)
};

// `item profit` per line; '#' comments and blank lines ignored.
ProfitTable parse_profit_table(std::istream& in, ItemCatalog& catalog);

// `tid time item:qty [item:qty ...]` per line; '#' comments and blanks ignored.
std::vector<TemporalTransaction> parse_database(std::istream& in, ItemCatalog& catalog);

// `tid item:qty [item:qty ...]` per line (database format minus the time column).
ModificationBatch parse_modifications(std::istream& in, ItemCatalog& catalog);

// Transaction with time t lands in period ceil(t / period_length); empty
// periods between occupied ones are materialized.
TemporalDatabase assign_periods(std::vector<TemporalTransaction> transactions,
                                std::int64_t period_length);

// Returns a database in which every tid named by the batch has its item map
// wholly replaced; timestamps and period membership are untouched.
TemporalDatabase apply_modifications(const TemporalDatabase& db, const ModificationBatch& batch);

// Canonical text form (period order, `tid time item:qty ...` with items by
// ascending id). Re-parsing plus assign_periods reproduces the database.
std::string serialize_database(const TemporalDatabase& db, const ItemCatalog& catalog);

// FNV-1a 64-bit over the canonical text, as 16 hex digits.
std::string database_fingerprint(const TemporalDatabase& db, const ItemCatalog& catalog);

// Every item in any transaction must have a profit entry.
void validate_profit_coverage(const TemporalDatabase& db, const ProfitTable& profits,
                              const ItemCatalog& catalog);
void validate_batch(const TemporalDatabase& db, const ModificationBatch& batch,
                    const ProfitTable& profits, const ItemCatalog& catalog);

}  // namespace houin
