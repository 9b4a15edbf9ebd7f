// houin: command-line front end for the on-shelf utility mining engine.
//
// Subcommands:
//   mine    build per-period utility trees, mine, and emit the result TSV
//   update  refresh a saved engine state against a modification file
//   gen     emit a seeded synthetic dataset (and optional modification stream)
//   bench   compare incremental refresh against remine-from-scratch

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "houin/generator.hpp"
#include "houin/maintainer.hpp"
#include "houin/miner.hpp"
#include "houin/oracle.hpp"
#include "houin/snapshot.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitSyntax = 2;
constexpr int kExitSemantic = 3;
constexpr int kExitStateMismatch = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw houin::ParseError("cannot open '" + path + "'", 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw houin::ParseError("cannot write '" + path + "'", 0);
    out << content;
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        write_file(out_path, content);
    }
}

int map_error(const std::exception& e) {
    if (dynamic_cast<const houin::FingerprintMismatchError*>(&e)) return kExitStateMismatch;
    if (dynamic_cast<const houin::ParseError*>(&e)) return kExitSyntax;
    if (dynamic_cast<const houin::DuplicateEntryError*>(&e)) return kExitSyntax;
    if (dynamic_cast<const houin::RangeError*>(&e)) return kExitSemantic;
    if (dynamic_cast<const houin::MissingTransactionError*>(&e)) return kExitSemantic;
    if (dynamic_cast<const houin::AbsentItemError*>(&e)) return kExitSemantic;
    if (dynamic_cast<const houin::UndefinedRatioError*>(&e)) return kExitSemantic;
    if (dynamic_cast<const std::invalid_argument*>(&e)) return kExitSyntax;
    return kExitInternal;
}

houin::Rational parse_min_util(const std::string& text) {
    houin::Rational lambda;
    try {
        lambda = houin::parse_ratio(text);
    } catch (const std::exception&) {
        throw houin::ParseError("cannot parse min-util '" + text + "'", 0);
    }
    if (!(lambda > houin::Rational(0)) || lambda > houin::Rational(1)) {
        throw houin::RangeError("min-util must be in (0, 1], got " + lambda.fraction_str());
    }
    return lambda;
}

// item-list-per-line files: tid and time come from the line number,
// quantities and profits from the seeded model.
struct BmsData {
    std::vector<houin::TemporalTransaction> transactions;
    houin::ProfitTable profits;
};

BmsData read_bms(const std::string& text, houin::ItemCatalog& catalog, std::uint64_t seed) {
    BmsData out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    houin::Tid tid = 0;
    std::vector<houin::ItemId> order;  // first-appearance order
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::vector<std::string> toks;
        std::string tok;
        while (ss >> tok) toks.push_back(tok);
        if (toks.empty()) continue;
        ++tid;
        houin::TemporalTransaction tr;
        tr.tid = tid;
        tr.time = tid;
        houin::SplitMix64 rng(seed ^ (0x626d73ull + static_cast<std::uint64_t>(tid) *
                                                        0x9E3779B97F4A7C15ull));
        std::vector<std::pair<houin::ItemId, std::int64_t>> raw;
        for (const auto& t : toks) {
            bool fresh = !catalog.find(t).has_value();
            houin::ItemId id = catalog.intern(t);
            if (fresh) order.push_back(id);
            raw.emplace_back(id, 1 + static_cast<std::int64_t>(rng.below(5)));
        }
        try {
            tr.items = houin::normalize_items(std::move(raw));
        } catch (const houin::Error& e) {
            throw houin::ParseError(e.what(), lineno);
        }
        out.transactions.push_back(std::move(tr));
    }

    // Profit model mirrors gen: magnitudes 1..10, one in ten items negative.
    houin::SplitMix64 rng(seed ^ 0x70726f66ull);
    std::vector<std::int64_t> magnitudes(order.size());
    for (auto& m : magnitudes) m = 1 + static_cast<std::int64_t>(rng.below(10));
    std::vector<std::size_t> shuffled(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) shuffled[i] = i;
    for (std::size_t i = shuffled.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(shuffled[i - 1], shuffled[j]);
    }
    std::size_t negatives = order.size() / 10;
    std::vector<bool> negative(order.size(), false);
    for (std::size_t i = 0; i < negatives; ++i) negative[shuffled[i]] = true;
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::int64_t p = negative[i] ? -magnitudes[i] : magnitudes[i];
        out.profits.set(order[i], houin::Rational(p));
    }
    return out;
}

struct MineArgs {
    std::string db_path, profits_path, out_path, state_path, format = "houin";
    std::int64_t period_length = 0;
    std::string min_util;
    std::size_t max_size = 0;
    std::uint64_t seed = 0;
};

int run_mine(const MineArgs& args) {
    houin::MiningConfig config;
    config.min_util_ratio = parse_min_util(args.min_util);
    config.max_itemset_size = args.max_size;
    if (args.period_length < 1) {
        throw houin::RangeError("period length must be >= 1");
    }

    houin::ItemCatalog catalog;
    houin::ProfitTable profits;
    std::vector<houin::TemporalTransaction> transactions;
    if (args.format == "bms") {
        BmsData bms = read_bms(read_file(args.db_path), catalog, args.seed);
        transactions = std::move(bms.transactions);
        profits = std::move(bms.profits);
    } else if (args.format == "houin") {
        {
            std::istringstream in(read_file(args.profits_path));
            profits = houin::parse_profit_table(in, catalog);
        }
        {
            std::istringstream in(read_file(args.db_path));
            transactions = houin::parse_database(in, catalog);
        }
    } else {
        throw houin::ParseError("unknown format '" + args.format + "'", 0);
    }

    houin::TemporalDatabase db =
        houin::assign_periods(std::move(transactions), args.period_length);
    houin::validate_profit_coverage(db, profits, catalog);

    std::cerr << "min-util = " << config.min_util_ratio.fraction_str() << "\n";
    houin::EngineState state = houin::make_engine(std::move(db), std::move(profits), config);
    std::string tsv = houin::serialize_result(state.result, catalog);
    emit(args.out_path, tsv);
    if (!args.state_path.empty()) {
        write_file(args.state_path, houin::write_snapshot(state, catalog, tsv));
    }
    return kExitOk;
}

struct UpdateArgs {
    std::string state_path, mods_path, out_path, emit_state_path;
};

int run_update(const UpdateArgs& args) {
    houin::LoadedState loaded = houin::load_snapshot(read_file(args.state_path));
    houin::ModificationBatch batch;
    {
        std::istringstream in(read_file(args.mods_path));
        batch = houin::parse_modifications(in, loaded.catalog);
    }
    houin::validate_batch(loaded.state.db, batch, loaded.state.profits, loaded.catalog);

    houin::RefreshStats stats;
    houin::MiningResult result = houin::refresh_houin(loaded.state, batch, &stats);
    std::string tsv = houin::serialize_result(result, loaded.catalog);
    emit(args.out_path, tsv);
    std::cerr << "scans=" << (stats.rescan_count + stats.phase2_scans) << " cases="
              << stats.case_histogram[0] << "," << stats.case_histogram[1] << ","
              << stats.case_histogram[2] << "," << stats.case_histogram[3]
              << " candidates=" << stats.candidate_count << "\n";
    if (!args.emit_state_path.empty()) {
        write_file(args.emit_state_path,
                   houin::write_snapshot(loaded.state, loaded.catalog, tsv));
    }
    return kExitOk;
}

struct GenArgs {
    houin::GenConfig config;
    std::string profit_range = "1..10";
    std::string neg_fraction = "0.1";
    std::string out_db = "gen.db";
    std::string out_profits = "gen.prof";
    std::string mods_out;
    std::int64_t mod_batches = 10;
    std::int64_t mods_per_batch = 10;
    std::uint64_t mods_seed = 0;
};

int run_gen(GenArgs args) {
    auto sep = args.profit_range.find("..");
    if (sep == std::string::npos) {
        throw houin::RangeError("profit range must look like LO..HI");
    }
    try {
        args.config.profit_lo = std::stoll(args.profit_range.substr(0, sep));
        args.config.profit_hi = std::stoll(args.profit_range.substr(sep + 2));
    } catch (const std::exception&) {
        throw houin::RangeError("bad profit range '" + args.profit_range + "'");
    }
    try {
        args.config.neg_fraction = houin::parse_ratio(args.neg_fraction);
    } catch (const std::exception&) {
        throw houin::RangeError("bad negative fraction '" + args.neg_fraction + "'");
    }

    houin::GeneratedData data = houin::generate_dataset(args.config);
    write_file(args.out_db, data.db_text);
    write_file(args.out_profits, data.profit_text);
    if (!args.mods_out.empty()) {
        write_file(args.mods_out,
                   houin::generate_mods_stream(args.config, args.mod_batches,
                                               args.mods_per_batch, args.mods_seed));
    }
    std::cerr << "wrote " << args.out_db << " and " << args.out_profits << "\n";
    return kExitOk;
}

struct BenchArgs {
    std::string db_path, profits_path, mods_stream_path, out_path;
    std::int64_t period_length = 0;
    std::string min_util;
    std::size_t max_size = 0;
    std::int64_t repeat = 1;
};

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    if (n == 0) return 0.0;
    if (n % 2 == 1) return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

std::string format_ms(double ms) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", ms);
    return buf;
}

int run_bench(const BenchArgs& args) {
    houin::MiningConfig config;
    config.min_util_ratio = parse_min_util(args.min_util);
    config.max_itemset_size = args.max_size;
    if (args.period_length < 1) throw houin::RangeError("period length must be >= 1");
    if (args.repeat < 1) throw houin::RangeError("repeat must be >= 1");

    houin::ItemCatalog catalog;
    houin::ProfitTable profits;
    {
        std::istringstream in(read_file(args.profits_path));
        profits = houin::parse_profit_table(in, catalog);
    }
    houin::TemporalDatabase db;
    {
        std::istringstream in(read_file(args.db_path));
        db = houin::assign_periods(houin::parse_database(in, catalog), args.period_length);
    }
    houin::validate_profit_coverage(db, profits, catalog);

    // Batches separated by blank lines.
    std::vector<houin::ModificationBatch> batches;
    {
        std::istringstream in(read_file(args.mods_stream_path));
        std::string line, chunk;
        auto flush = [&]() {
            if (chunk.empty()) return;
            std::istringstream cs(chunk);
            batches.push_back(houin::parse_modifications(cs, catalog));
            chunk.clear();
        };
        while (std::getline(in, line)) {
            std::string trimmed = line;
            auto pos = trimmed.find_first_not_of(" \t\r");
            if (pos == std::string::npos) {
                flush();
            } else {
                chunk += line + "\n";
            }
        }
        flush();
    }

    houin::EngineState state = houin::make_engine(db, profits, config);

    std::string csv = "batch,refresh_ms,remine_ms,refresh_scans,remine_scans,case1,case2,case3,case4\n";
    std::vector<double> refresh_times, remine_times;
    std::vector<double> refresh_scans_all, remine_scans_all;
    std::vector<double> case_cols[4];

    for (std::size_t b = 0; b < batches.size(); ++b) {
        const houin::ModificationBatch& batch = batches[b];
        houin::validate_batch(state.db, batch, profits, catalog);
        const houin::TemporalDatabase pre_db = state.db;

        std::vector<double> refresh_ms;
        houin::RefreshStats stats;
        houin::EngineState advanced;
        houin::MiningResult refresh_result;
        for (std::int64_t r = 0; r < args.repeat; ++r) {
            houin::EngineState trial = state.clone();
            houin::RefreshStats trial_stats;
            auto start = std::chrono::steady_clock::now();
            houin::MiningResult result = houin::refresh_houin(trial, batch, &trial_stats);
            auto end = std::chrono::steady_clock::now();
            refresh_ms.push_back(
                std::chrono::duration<double, std::milli>(end - start).count());
            if (r == 0) {
                stats = trial_stats;
                refresh_result = std::move(result);
                advanced = std::move(trial);
            }
        }

        std::vector<double> remine_ms;
        houin::oracle::BaselineOutput baseline;
        for (std::int64_t r = 0; r < args.repeat; ++r) {
            auto run = houin::oracle::remine_baseline(pre_db, batch, profits, config);
            remine_ms.push_back(run.wall_ms);
            if (r == 0) baseline = std::move(run);
        }

        if (!houin::same_houin(refresh_result, baseline.result)) {
            std::cerr << "refresh and remine disagree on batch " << (b + 1) << "\n";
            return kExitInternal;
        }

        const double rms = median(refresh_ms);
        const double bms = median(remine_ms);
        const std::int64_t refresh_scans = stats.rescan_count + stats.phase2_scans;
        csv += std::to_string(b + 1) + "," + format_ms(rms) + "," + format_ms(bms) + "," +
               std::to_string(refresh_scans) + "," + std::to_string(baseline.scan_count);
        for (int c = 0; c < 4; ++c) {
            csv += "," + std::to_string(stats.case_histogram[static_cast<std::size_t>(c)]);
            case_cols[c].push_back(
                static_cast<double>(stats.case_histogram[static_cast<std::size_t>(c)]));
        }
        csv += "\n";

        refresh_times.push_back(rms);
        remine_times.push_back(bms);
        refresh_scans_all.push_back(static_cast<double>(refresh_scans));
        remine_scans_all.push_back(static_cast<double>(baseline.scan_count));

        state = std::move(advanced);
    }

    csv += "median," + format_ms(median(refresh_times)) + "," + format_ms(median(remine_times)) +
           "," + std::to_string(static_cast<std::int64_t>(median(refresh_scans_all))) + "," +
           std::to_string(static_cast<std::int64_t>(median(remine_scans_all)));
    for (int c = 0; c < 4; ++c) {
        csv += "," + std::to_string(static_cast<std::int64_t>(median(case_cols[c])));
    }
    csv += "\n";

    emit(args.out_path, csv);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"on-shelf utility itemset miner with incremental maintenance"};
    app.require_subcommand(1);

    MineArgs mine_args;
    auto* mine = app.add_subcommand("mine", "mine a temporal database");
    mine->add_option("--db", mine_args.db_path, "database file")->required();
    mine->add_option("--profits", mine_args.profits_path, "profit table file");
    mine->add_option("--period-length", mine_args.period_length, "timestamps per period")
        ->required();
    mine->add_option("--min-util", mine_args.min_util, "ratio: 0.3, 3/10, or 30%")->required();
    mine->add_option("--max-size", mine_args.max_size, "itemset size cap (0 = unbounded)");
    mine->add_option("--out", mine_args.out_path, "result TSV path (default stdout)");
    mine->add_option("--state", mine_args.state_path, "write engine snapshot here");
    mine->add_option("--format", mine_args.format, "input format: houin or bms");
    mine->add_option("--seed", mine_args.seed, "seed for bms quantity/profit synthesis");

    UpdateArgs update_args;
    auto* update = app.add_subcommand("update", "refresh a snapshot with modifications");
    update->add_option("--state", update_args.state_path, "engine snapshot")->required();
    update->add_option("--mods", update_args.mods_path, "modification file")->required();
    update->add_option("--out", update_args.out_path, "result TSV path (default stdout)");
    update->add_option("--emit-state", update_args.emit_state_path, "write refreshed snapshot");

    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "generate a seeded synthetic dataset");
    gen->add_option("--transactions", gen_args.config.transactions, "transaction count")
        ->required();
    gen->add_option("--items", gen_args.config.items, "distinct item count")->required();
    gen->add_option("--periods", gen_args.config.periods, "period count")->required();
    gen->add_option("--max-qty", gen_args.config.max_qty, "max quantity per item");
    gen->add_option("--profit-range", gen_args.profit_range, "profit magnitudes LO..HI");
    gen->add_option("--neg-fraction", gen_args.neg_fraction,
                    "fraction of items with negative profit");
    gen->add_option("--seed", gen_args.config.seed, "dataset seed");
    gen->add_option("--min-len", gen_args.config.min_len, "min items per transaction");
    gen->add_option("--max-len", gen_args.config.max_len, "max items per transaction");
    gen->add_option("--out-db", gen_args.out_db, "database output path");
    gen->add_option("--out-profits", gen_args.out_profits, "profit table output path");
    gen->add_option("--mods-out", gen_args.mods_out, "also write a modification stream here");
    gen->add_option("--mod-batches", gen_args.mod_batches, "batches in the stream");
    gen->add_option("--mods-per-batch", gen_args.mods_per_batch, "transactions per batch");
    gen->add_option("--mods-seed", gen_args.mods_seed, "stream seed");

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "compare refresh against remine");
    bench->add_option("--db", bench_args.db_path, "database file")->required();
    bench->add_option("--profits", bench_args.profits_path, "profit table file")->required();
    bench->add_option("--period-length", bench_args.period_length, "timestamps per period")
        ->required();
    bench->add_option("--min-util", bench_args.min_util, "ratio")->required();
    bench->add_option("--mods-stream", bench_args.mods_stream_path,
                      "batches separated by blank lines")
        ->required();
    bench->add_option("--repeat", bench_args.repeat, "timing repeats per batch");
    bench->add_option("--out", bench_args.out_path, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitSyntax;
    }

    try {
        if (mine->parsed()) {
            if (mine_args.format == "houin" && mine_args.profits_path.empty()) {
                std::cerr << "error: --profits is required for the houin format\n";
                return kExitSyntax;
            }
            return run_mine(mine_args);
        }
        if (update->parsed()) return run_update(update_args);
        if (gen->parsed()) {
            try {
                return run_gen(gen_args);
            } catch (const houin::RangeError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitSyntax;  // invalid generator ranges are usage errors
            }
        }
        if (bench->parsed()) return run_bench(bench_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return map_error(e);
    }
    return kExitInternal;
}
