#include "houin/snapshot.hpp"

#include <sstream>

#include "houin/measures.hpp"

namespace houin {

namespace {

constexpr const char* kMagic = "houinstate v1";

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string to_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string hex(16, '0');
    for (int i = 15; i >= 0; --i) {
        hex[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return hex;
}

}  // namespace

std::string write_snapshot(const EngineState& state, const ItemCatalog& catalog,
                           const std::string& result_tsv) {
    std::string out;
    out += std::string(kMagic) + "\n";
    out += "lambda " + state.config.min_util_ratio.fraction_str() + "\n";
    out += "period-length " + std::to_string(state.db.period_length()) + "\n";
    out += "osp union\n";
    out += "max-size " + std::to_string(state.config.max_itemset_size) + "\n";

    out += "items " + std::to_string(catalog.size()) + "\n";
    for (std::size_t i = 1; i <= catalog.size(); ++i) {
        ItemId id = static_cast<ItemId>(i);
        out += catalog.name(id) + " " + state.profits.profit(id).fraction_str() + "\n";
    }

    const std::string db_text = serialize_database(state.db, catalog);
    out += "db-fingerprint " + to_hex(fnv1a(db_text)) + "\n";
    out += "db " + std::to_string(state.db.transaction_count()) + "\n";
    out += db_text;

    out += "trees " + std::to_string(state.periods.size()) + "\n";
    for (const auto& ps : state.periods) {
        out += "tree " + std::to_string(ps.tree.period_index()) + "\n";
        out += "pttu " + ps.tree.pttu().fraction_str() + "\n";
        out += "threshold " + ps.tree.threshold().fraction_str() + "\n";
        out += ps.tree.snapshot(catalog);
    }

    std::size_t tsv_lines = 0;
    for (char c : result_tsv) {
        if (c == '\n') ++tsv_lines;
    }
    out += "result " + std::to_string(tsv_lines) + "\n";
    out += result_tsv;
    out += "end\n";
    return out;
}

LoadedState load_snapshot(const std::string& text) {
    std::vector<std::string> lines;
    {
        std::istringstream ss(text);
        std::string line;
        while (std::getline(ss, line)) lines.push_back(line);
    }
    std::size_t at = 0;
    auto next_line = [&]() -> const std::string& {
        if (at >= lines.size()) throw ParseError("snapshot truncated", at);
        return lines[at++];
    };
    auto expect_kv = [&](const std::string& key) -> std::string {
        const std::string& line = next_line();
        if (line.rfind(key + " ", 0) != 0) {
            throw ParseError("expected '" + key + " ...', got '" + line + "'", at);
        }
        return line.substr(key.size() + 1);
    };

    if (next_line() != kMagic) throw ParseError("not a state snapshot", 1);

    LoadedState loaded;
    loaded.state.config.min_util_ratio = parse_rational(expect_kv("lambda"));
    std::int64_t period_length = std::stoll(expect_kv("period-length"));
    std::string osp = expect_kv("osp");
    if (osp != "union") throw ParseError("unsupported osp mode '" + osp + "'", at);
    loaded.state.config.max_itemset_size = std::stoull(expect_kv("max-size"));
    loaded.state.config.validate();

    std::size_t item_count = std::stoull(expect_kv("items"));
    for (std::size_t i = 0; i < item_count; ++i) {
        std::istringstream ss(next_line());
        std::string name, profit;
        if (!(ss >> name >> profit)) throw ParseError("bad item line", at);
        ItemId id = loaded.catalog.intern(name);
        loaded.state.profits.set(id, parse_rational(profit));
    }

    const std::string fingerprint = expect_kv("db-fingerprint");
    std::size_t db_lines = std::stoull(expect_kv("db"));
    std::string db_text;
    for (std::size_t i = 0; i < db_lines; ++i) {
        db_text += next_line() + "\n";
    }
    if (to_hex(fnv1a(db_text)) != fingerprint) {
        throw FingerprintMismatchError("database fingerprint mismatch");
    }
    {
        std::istringstream ss(db_text);
        auto transactions = parse_database(ss, loaded.catalog);
        loaded.state.db = assign_periods(std::move(transactions), period_length);
    }
    validate_profit_coverage(loaded.state.db, loaded.state.profits, loaded.catalog);

    std::size_t tree_count = std::stoull(expect_kv("trees"));
    if (tree_count != loaded.state.db.period_count()) {
        throw ParseError("tree count does not match the database's periods", at);
    }
    for (std::size_t t = 1; t <= tree_count; ++t) {
        std::size_t period = std::stoull(expect_kv("tree"));
        if (period != t) throw ParseError("tree sections out of order", at);
        Rational pttu_v = parse_rational(expect_kv("pttu"));
        Rational threshold_v = parse_rational(expect_kv("threshold"));

        // Section body: "header <n>" + n, "root", "nodes <m>" + m lines.
        std::vector<std::string> body;
        {
            const std::string& header_line = next_line();
            body.push_back(header_line);
            std::istringstream ss(header_line);
            std::string word;
            std::size_t n = 0;
            if (!(ss >> word >> n) || word != "header") {
                throw ParseError("expected tree header line", at);
            }
            for (std::size_t i = 0; i < n; ++i) body.push_back(next_line());
            body.push_back(next_line());  // root
            const std::string& nodes_line = next_line();
            body.push_back(nodes_line);
            std::istringstream ns(nodes_line);
            std::size_t m = 0;
            if (!(ns >> word >> m) || word != "nodes") {
                throw ParseError("expected tree nodes line", at);
            }
            for (std::size_t i = 0; i < m; ++i) body.push_back(next_line());
        }
        PeriodTree tree =
            PeriodTree::parse_snapshot(period, pttu_v, threshold_v, body, loaded.catalog);

        PeriodState ps{std::move(tree), {}, {}, {}, false};
        PeriodProfile profile =
            compute_period_profile(loaded.state.db, period, loaded.state.profits);
        ps.items = std::move(profile.items);
        for (const auto& tr : loaded.state.db.period(period)) {
            ps.routed.emplace(tr.tid, ps.tree.path_items(tr));
        }
        loaded.state.periods.push_back(std::move(ps));
    }

    std::size_t tsv_lines = std::stoull(expect_kv("result"));
    for (std::size_t i = 0; i < tsv_lines; ++i) {
        loaded.cached_tsv += next_line() + "\n";
    }
    if (next_line() != "end") throw ParseError("missing snapshot terminator", at);
    return loaded;
}

}  // namespace houin
