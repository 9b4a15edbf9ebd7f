#include "houin/temporal_db.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

namespace houin {

namespace {

// Strips comments and surrounding whitespace; returns false for skippable lines.
bool clean_line(std::string& line) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto begin = line.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return false;
    auto end = line.find_last_not_of(" \t\r\n");
    line = line.substr(begin, end - begin + 1);
    return true;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

std::int64_t parse_int(const std::string& tok, const char* what, std::size_t lineno) {
    try {
        std::size_t pos = 0;
        std::int64_t v = std::stoll(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("bad ") + what + " '" + tok + "'", lineno);
    }
}

std::pair<ItemId, std::int64_t> parse_item_qty(const std::string& tok, ItemCatalog& catalog,
                                               std::size_t lineno) {
    auto colon = tok.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size()) {
        throw ParseError("expected item:qty, got '" + tok + "'", lineno);
    }
    ItemId item = catalog.intern(tok.substr(0, colon));
    std::int64_t qty = parse_int(tok.substr(colon + 1), "quantity", lineno);
    if (qty <= 0) {
        throw ParseError("quantity must be positive in '" + tok + "'", lineno);
    }
    return {item, qty};
}

}  // namespace

const std::vector<TemporalTransaction>& TemporalDatabase::period(std::size_t p) const {
    if (p < 1 || p > periods_.size()) {
        throw RangeError("period index " + std::to_string(p) + " out of range [1, " +
                         std::to_string(periods_.size()) + "]");
    }
    return periods_[p - 1];
}

std::size_t TemporalDatabase::transaction_count() const {
    std::size_t n = 0;
    for (const auto& p : periods_) n += p.size();
    return n;
}

bool TemporalDatabase::has_tid(Tid tid) const { return index_.count(tid) != 0; }

const TemporalTransaction& TemporalDatabase::transaction(Tid tid) const {
    auto it = index_.find(tid);
    if (it == index_.end()) {
        throw MissingTransactionError("no transaction with tid " + std::to_string(tid));
    }
    return periods_[it->second.first][it->second.second];
}

std::size_t TemporalDatabase::period_of(Tid tid) const {
    auto it = index_.find(tid);
    if (it == index_.end()) {
        throw MissingTransactionError("no transaction with tid " + std::to_string(tid));
    }
    return it->second.first + 1;
}

void TemporalDatabase::rebuild_index() {
    index_.clear();
    for (std::size_t p = 0; p < periods_.size(); ++p) {
        for (std::size_t i = 0; i < periods_[p].size(); ++i) {
            index_.emplace(periods_[p][i].tid, std::make_pair(p, i));
        }
    }
}

ProfitTable parse_profit_table(std::istream& in, ItemCatalog& catalog) {
    ProfitTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!clean_line(line)) continue;
        auto toks = split_ws(line);
        if (toks.size() != 2) {
            throw ParseError("expected 'item profit', got '" + line + "'", lineno);
        }
        ItemId item = catalog.intern(toks[0]);
        Rational profit;
        try {
            profit = parse_rational(toks[1]);
        } catch (const std::exception&) {
            throw ParseError("bad profit '" + toks[1] + "'", lineno);
        }
        try {
            table.set(item, profit);
        } catch (const DuplicateEntryError&) {
            throw DuplicateEntryError("duplicate profit entry for item '" + toks[0] + "'");
        }
    }
    return table;
}

std::vector<TemporalTransaction> parse_database(std::istream& in, ItemCatalog& catalog) {
    std::vector<TemporalTransaction> out;
    std::map<Tid, std::size_t> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!clean_line(line)) continue;
        auto toks = split_ws(line);
        if (toks.size() < 3) {
            throw ParseError("expected 'tid time item:qty ...', got '" + line + "'", lineno);
        }
        TemporalTransaction tr;
        tr.tid = parse_int(toks[0], "tid", lineno);
        if (tr.tid <= 0) throw ParseError("tid must be positive", lineno);
        tr.time = parse_int(toks[1], "time", lineno);
        if (tr.time < 0) throw ParseError("time must be non-negative", lineno);
        std::vector<std::pair<ItemId, std::int64_t>> raw;
        for (std::size_t i = 2; i < toks.size(); ++i) {
            raw.push_back(parse_item_qty(toks[i], catalog, lineno));
        }
        try {
            tr.items = normalize_items(std::move(raw));
        } catch (const Error& e) {
            throw ParseError(e.what(), lineno);
        }
        if (!seen.emplace(tr.tid, lineno).second) {
            throw ParseError("tid " + std::to_string(tr.tid) + " repeated", lineno);
        }
        out.push_back(std::move(tr));
    }
    return out;
}

ModificationBatch parse_modifications(std::istream& in, ItemCatalog& catalog) {
    ModificationBatch batch;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!clean_line(line)) continue;
        auto toks = split_ws(line);
        if (toks.size() < 2) {
            throw ParseError("expected 'tid item:qty ...', got '" + line + "'", lineno);
        }
        Tid tid = parse_int(toks[0], "tid", lineno);
        std::vector<std::pair<ItemId, std::int64_t>> raw;
        for (std::size_t i = 1; i < toks.size(); ++i) {
            raw.push_back(parse_item_qty(toks[i], catalog, lineno));
        }
        ItemQuantities items;
        try {
            items = normalize_items(std::move(raw));
        } catch (const Error& e) {
            throw ParseError(e.what(), lineno);
        }
        batch.add(tid, std::move(items));
    }
    return batch;
}

TemporalDatabase assign_periods(std::vector<TemporalTransaction> transactions,
                                std::int64_t period_length) {
    if (period_length < 1) {
        throw RangeError("period length must be >= 1");
    }
    TemporalDatabase db;
    db.period_length_ = period_length;
    std::size_t max_period = 0;
    for (const auto& tr : transactions) {
        if (tr.time < 1) {
            throw RangeError("timestamp must be >= 1 for period assignment (tid " +
                             std::to_string(tr.tid) + ")");
        }
        auto p = static_cast<std::size_t>((tr.time + period_length - 1) / period_length);
        max_period = std::max(max_period, p);
    }
    db.periods_.assign(max_period, {});
    for (auto& tr : transactions) {
        auto p = static_cast<std::size_t>((tr.time + period_length - 1) / period_length);
        db.periods_[p - 1].push_back(std::move(tr));
    }
    db.rebuild_index();
    return db;
}

TemporalDatabase apply_modifications(const TemporalDatabase& db, const ModificationBatch& batch) {
    TemporalDatabase out = db;
    for (const auto& [tid, items] : batch.entries()) {
        auto it = out.index_.find(tid);
        if (it == out.index_.end()) {
            throw MissingTransactionError("batch names unknown tid " + std::to_string(tid));
        }
        out.periods_[it->second.first][it->second.second].items = items;
    }
    return out;
}

std::string serialize_database(const TemporalDatabase& db, const ItemCatalog& catalog) {
    std::string out;
    for (std::size_t p = 1; p <= db.period_count(); ++p) {
        for (const auto& tr : db.period(p)) {
            out += std::to_string(tr.tid);
            out += ' ';
            out += std::to_string(tr.time);
            // items by name, so the canonical form is catalog-independent
            std::vector<std::pair<std::string, std::int64_t>> named;
            named.reserve(tr.items.size());
            for (const auto& [item, qty] : tr.items) {
                named.emplace_back(catalog.name(item), qty);
            }
            std::sort(named.begin(), named.end());
            for (const auto& [name, qty] : named) {
                out += ' ';
                out += name;
                out += ':';
                out += std::to_string(qty);
            }
            out += '\n';
        }
    }
    return out;
}

std::string database_fingerprint(const TemporalDatabase& db, const ItemCatalog& catalog) {
    const std::string text = serialize_database(db, catalog);
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    static const char* digits = "0123456789abcdef";
    std::string hex(16, '0');
    for (int i = 15; i >= 0; --i) {
        hex[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return hex;
}

void validate_profit_coverage(const TemporalDatabase& db, const ProfitTable& profits,
                              const ItemCatalog& catalog) {
    for (std::size_t p = 1; p <= db.period_count(); ++p) {
        for (const auto& tr : db.period(p)) {
            for (const auto& [item, qty] : tr.items) {
                (void)qty;
                if (!profits.contains(item)) {
                    throw AbsentItemError("item '" + catalog.name(item) +
                                          "' has no profit entry");
                }
            }
        }
    }
}

void validate_batch(const TemporalDatabase& db, const ModificationBatch& batch,
                    const ProfitTable& profits, const ItemCatalog& catalog) {
    for (const auto& [tid, items] : batch.entries()) {
        if (!db.has_tid(tid)) {
            throw MissingTransactionError("batch names unknown tid " + std::to_string(tid));
        }
        for (const auto& [item, qty] : items) {
            (void)qty;
            if (!profits.contains(item)) {
                throw AbsentItemError("item '" + catalog.name(item) + "' has no profit entry");
            }
        }
    }
}

}  // namespace houin
