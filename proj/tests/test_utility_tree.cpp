#include "doctest.h"

#include <set>

#include "houin/utility_tree.hpp"
#include "support.hpp"

using namespace houin;

namespace {

MiningConfig config_with(Rational lambda) {
    MiningConfig cfg;
    cfg.min_util_ratio = std::move(lambda);
    return cfg;
}

std::vector<ItemId> header_items(const PeriodTree& tree) {
    std::vector<ItemId> out;
    for (const auto& e : tree.header()) out.push_back(e.item);
    return out;
}

struct ChainMass {
    Rational twu;
    Rational util;
    std::int64_t count = 0;
};

ChainMass chain_mass(const PeriodTree& tree, ItemId item) {
    ChainMass m;
    for (const PeriodTree::Node* n = tree.chain_head(item); n != nullptr;
         n = n->next_same_item) {
        m.twu += n->twu_sum;
        m.util += n->util_sum;
        m.count += n->count;
    }
    return m;
}

std::set<const PeriodTree::Node*> collect_tree_nodes(const PeriodTree& tree) {
    std::set<const PeriodTree::Node*> nodes;
    std::vector<const PeriodTree::Node*> stack{tree.root()};
    while (!stack.empty()) {
        const auto* cur = stack.back();
        stack.pop_back();
        for (const auto& c : cur->children) {
            nodes.insert(c.get());
            stack.push_back(c.get());
        }
    }
    return nodes;
}

}  // namespace

TEST_SUITE_BEGIN("utility-tree");

TEST_CASE("build orders the header by sign group, twu, then id") {
    auto f = testsupport::golden();

    SUBCASE("lambda 0.30: all four items, negative at the tail") {
        PeriodTree tree = PeriodTree::build(f.db, 1, f.profits, config_with(Rational(3, 10)));
        CHECK(header_items(tree) == std::vector<ItemId>{f.A, f.C, f.D, f.B});
        CHECK(tree.header()[0].twu == Rational(88));
        CHECK(tree.header()[1].twu == Rational(88));
        CHECK(tree.header()[2].twu == Rational(74));
        CHECK(tree.header()[3].twu == Rational(74));
        CHECK(tree.pttu() == Rational(88));
        CHECK(tree.threshold() == Rational(88) * Rational(3, 10));

        // tids 1 and 3 share the full path, tid 2 branches off after A, C
        const PeriodTree::Node* a = tree.chain_head(f.A);
        REQUIRE(a != nullptr);
        CHECK(a->count == 3);
        CHECK(a->next_same_item == nullptr);
        CHECK(tree.root()->count == 3);
        CHECK(tree.node_count() == 4);  // single chain A-C-D-B
    }

    SUBCASE("lambda 0.90 drops the low-twu items") {
        PeriodTree tree = PeriodTree::build(f.db, 1, f.profits, config_with(Rational(9, 10)));
        CHECK(header_items(tree) == std::vector<ItemId>{f.A, f.C});
    }

    SUBCASE("empty period gives a root-only tree") {
        ItemCatalog c;
        std::istringstream in("1 1 X:1\n2 7 X:2");
        auto db = assign_periods(parse_database(in, c), 3);
        ProfitTable profits;
        profits.set(*c.find("X"), Rational(2));
        PeriodTree tree = PeriodTree::build(db, 2, profits, config_with(Rational(1, 2)));
        CHECK(tree.header().empty());
        CHECK(tree.node_count() == 0);
        CHECK(tree.root()->count == 0);
    }
}

TEST_CASE("transaction items are filtered and ordered by the header") {
    auto f = testsupport::golden();
    PeriodTree tree1 = PeriodTree::build(f.db, 1, f.profits, config_with(Rational(3, 10)));

    auto ordered = tree1.sort_transaction_items(f.db.transaction(1), f.profits);
    REQUIRE(ordered.size() == 4);
    CHECK(ordered[0] == std::pair<ItemId, Rational>{f.A, Rational(25)});
    CHECK(ordered[1] == std::pair<ItemId, Rational>{f.C, Rational(2)});
    CHECK(ordered[2] == std::pair<ItemId, Rational>{f.D, Rational(4)});
    CHECK(ordered[3] == std::pair<ItemId, Rational>{f.B, Rational(-8)});

    PeriodTree tree2 = PeriodTree::build(f.db, 2, f.profits, config_with(Rational(3, 10)));
    auto t5 = tree2.sort_transaction_items(f.db.transaction(5), f.profits);
    REQUIRE(t5.size() == 1);
    CHECK(t5[0] == std::pair<ItemId, Rational>{f.C, Rational(6)});

    // a transaction with no header items filters to nothing
    PeriodTree narrow = PeriodTree::build(f.db, 1, f.profits, config_with(Rational(9, 10)));
    TemporalTransaction only_b;
    only_b.tid = 50;
    only_b.time = 1;
    only_b.items = {{f.B, 2}};
    CHECK(narrow.sort_transaction_items(only_b, f.profits).empty());
}

TEST_CASE("insert accumulates mass along a shared path") {
    auto f = testsupport::golden();
    std::vector<std::pair<ItemId, Rational>> header{
        {f.A, Rational(88)}, {f.C, Rational(88)}, {f.D, Rational(74)}, {f.B, Rational(74)}};
    PeriodTree tree(1, Rational(88), Rational(132, 5), header);

    PeriodTree::OrderedItems path{
        {f.A, Rational(25)}, {f.C, Rational(2)}, {f.D, Rational(4)}, {f.B, Rational(-8)}};
    tree.insert_path(path, Rational(31));
    CHECK(tree.node_count() == 4);
    CHECK(tree.chain_head(f.B)->count == 1);
    CHECK(tree.chain_head(f.B)->twu_sum == Rational(31));

    tree.insert_path(path, Rational(31));
    CHECK(tree.node_count() == 4);  // same chain, doubled mass
    CHECK(tree.chain_head(f.A)->count == 2);
    CHECK(tree.chain_head(f.A)->twu_sum == Rational(62));
    CHECK(tree.chain_head(f.A)->util_sum == Rational(50));
    CHECK(tree.chain_head(f.B)->util_sum == Rational(-16));

    tree.insert_path(PeriodTree::OrderedItems{}, Rational(7));
    CHECK(tree.root()->count == 3);
    CHECK(tree.node_count() == 4);

    SUBCASE("order violations are contract errors") {
        PeriodTree::OrderedItems bad{{f.C, Rational(2)}, {f.A, Rational(25)}};
        CHECK_THROWS_AS(tree.insert_path(bad, Rational(27)), ContractError);
        ItemId ghost = f.catalog.intern("ghost");
        PeriodTree::OrderedItems unknown{{ghost, Rational(1)}};
        CHECK_THROWS_AS(tree.insert_path(unknown, Rational(1)), ContractError);
    }
}

TEST_CASE("conditional pattern bases") {
    auto f = testsupport::golden();
    std::vector<std::pair<ItemId, Rational>> header{
        {f.A, Rational(88)}, {f.C, Rational(88)}, {f.D, Rational(74)}, {f.B, Rational(74)}};
    PeriodTree tree(1, Rational(88), Rational(132, 5), header);
    tree.insert_path(PeriodTree::OrderedItems{{f.A, Rational(25)},
                                              {f.C, Rational(2)},
                                              {f.D, Rational(4)},
                                              {f.B, Rational(-8)}},
                     Rational(31));

    auto base_b = tree.conditional_pattern_base(f.B);
    REQUIRE(base_b.size() == 1);
    CHECK(base_b[0].items == std::vector<ItemId>{f.A, f.C, f.D});
    CHECK(base_b[0].count == 1);
    CHECK(base_b[0].twu_sum == Rational(31));

    auto base_a = tree.conditional_pattern_base(f.A);
    REQUIRE(base_a.size() == 1);
    CHECK(base_a[0].items.empty());  // the topmost item hangs off the root

    ItemId ghost = f.catalog.intern("ghost");
    CHECK_THROWS_AS(tree.conditional_pattern_base(ghost), AbsentItemError);
}

TEST_CASE("remove splices nodes and merges equal-label siblings") {
    auto f = testsupport::golden();

    SUBCASE("single-chain splice keeps lower masses") {
        std::vector<std::pair<ItemId, Rational>> header{
            {f.A, Rational(88)}, {f.C, Rational(88)}, {f.D, Rational(74)}, {f.B, Rational(74)}};
        PeriodTree tree(1, Rational(88), Rational(132, 5), header);
        tree.insert_path(PeriodTree::OrderedItems{{f.A, Rational(25)},
                                                  {f.C, Rational(2)},
                                                  {f.D, Rational(4)},
                                                  {f.B, Rational(-8)}},
                         Rational(31));
        tree.remove_header_item(f.C);
        CHECK(header_items(tree) == std::vector<ItemId>{f.A, f.D, f.B});
        CHECK(tree.node_count() == 3);
        const auto* d = tree.chain_head(f.D);
        REQUIRE(d != nullptr);
        CHECK(d->parent->item == f.A);
        CHECK(d->twu_sum == Rational(31));
        CHECK(d->util_sum == Rational(4));
        CHECK(tree.chain_head(f.B)->util_sum == Rational(-8));
    }

    SUBCASE("removing the only item collapses to the root") {
        std::vector<std::pair<ItemId, Rational>> header{{f.A, Rational(10)}};
        PeriodTree tree(1, Rational(10), Rational(1), header);
        tree.insert_path(PeriodTree::OrderedItems{{f.A, Rational(5)}}, Rational(5));
        tree.remove_header_item(f.A);
        CHECK(tree.header().empty());
        CHECK(tree.node_count() == 0);
        CHECK(tree.root()->count == 1);  // the transaction is still routed at the root
    }

    SUBCASE("orphaned children merge into an existing sibling") {
        std::vector<std::pair<ItemId, Rational>> header{{f.A, Rational(20)},
                                                        {f.C, Rational(30)}};
        PeriodTree tree(1, Rational(30), Rational(1), header);
        tree.insert_path(
            PeriodTree::OrderedItems{{f.A, Rational(10)}, {f.C, Rational(3)}}, Rational(13));
        tree.insert_path(PeriodTree::OrderedItems{{f.C, Rational(4)}}, Rational(4));
        REQUIRE(tree.node_count() == 3);

        tree.remove_header_item(f.A);
        CHECK(tree.node_count() == 1);  // the two C nodes merged
        const auto* c = tree.chain_head(f.C);
        REQUIRE(c != nullptr);
        CHECK(c->next_same_item == nullptr);
        CHECK(c->count == 2);
        CHECK(c->twu_sum == Rational(17));
        CHECK(c->util_sum == Rational(7));
    }

    SUBCASE("missing item") {
        std::vector<std::pair<ItemId, Rational>> header{{f.A, Rational(10)}};
        PeriodTree tree(1, Rational(10), Rational(1), header);
        CHECK_THROWS_AS(tree.remove_header_item(f.B), AbsentItemError);
    }
}

TEST_CASE("append adds entries at the tail in twu order") {
    auto f = testsupport::golden();
    PeriodTree tree = PeriodTree::build(f.db, 1, f.profits, config_with(Rational(3, 10)));
    ItemId e = f.catalog.intern("E");
    ItemId g = f.catalog.intern("G");

    SUBCASE("single append lands after everything") {
        tree.append_header_items({{e, Rational(30)}});
        CHECK(header_items(tree) == std::vector<ItemId>{f.A, f.C, f.D, f.B, e});
        // no paths are retrofitted, so the new entry has no nodes yet
        CHECK(tree.chain_head(e) == nullptr);
        CHECK(tree.conditional_pattern_base(e).empty());
    }
    SUBCASE("empty append is a no-op") {
        tree.append_header_items({});
        CHECK(header_items(tree) == std::vector<ItemId>{f.A, f.C, f.D, f.B});
    }
    SUBCASE("ties break by ascending id") {
        tree.append_header_items({{g, Rational(30)}, {e, Rational(30)}});
        CHECK(header_items(tree) == std::vector<ItemId>{f.A, f.C, f.D, f.B, e, g});
    }
    SUBCASE("duplicates are rejected") {
        CHECK_THROWS_AS(tree.append_header_items({{f.A, Rational(1)}}), DuplicateEntryError);
    }
}

TEST_CASE("detach is the exact inverse of insert") {
    auto f = testsupport::golden();
    std::vector<std::pair<ItemId, Rational>> header{
        {f.A, Rational(88)}, {f.C, Rational(88)}, {f.D, Rational(74)}, {f.B, Rational(74)}};
    const PeriodTree::OrderedItems path1{
        {f.A, Rational(25)}, {f.C, Rational(2)}, {f.D, Rational(4)}, {f.B, Rational(-8)}};
    const PeriodTree::OrderedItems path3{
        {f.A, Rational(5)}, {f.C, Rational(10)}, {f.D, Rational(28)}, {f.B, Rational(-2)}};

    SUBCASE("insert then detach leaves a root-only tree") {
        PeriodTree tree(1, Rational(88), Rational(132, 5), header);
        tree.insert_path(path1, Rational(31));
        tree.detach_transaction(path1, Rational(31));
        CHECK(tree.node_count() == 0);
        CHECK(tree.root()->count == 0);
        CHECK(tree.root()->twu_sum == Rational(0));
    }

    SUBCASE("shared prefixes survive a sibling detach") {
        PeriodTree tree(1, Rational(88), Rational(132, 5), header);
        tree.insert_path(path1, Rational(31));
        tree.insert_path(path3, Rational(43));
        tree.detach_transaction(path1, Rational(31));
        CHECK(tree.node_count() == 4);
        CHECK(tree.chain_head(f.A)->count == 1);
        CHECK(tree.chain_head(f.A)->twu_sum == Rational(43));
        CHECK(tree.chain_head(f.A)->util_sum == Rational(5));
        CHECK(tree.chain_head(f.D)->util_sum == Rational(28));
    }

    SUBCASE("detaching a path that was never inserted fails loudly") {
        PeriodTree tree(1, Rational(88), Rational(132, 5), header);
        tree.insert_path(path1, Rational(31));
        PeriodTree::OrderedItems other{{f.A, Rational(10)}, {f.D, Rational(8)}};
        CHECK_THROWS_AS(tree.detach_transaction(other, Rational(18)), InconsistencyError);
        // underflow: detach twice
        tree.detach_transaction(path1, Rational(31));
        CHECK_THROWS_AS(tree.detach_transaction(path1, Rational(31)), InconsistencyError);
    }
}

TEST_CASE("mass conservation against the measures module") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto data = testsupport::random_db(seed);
        MiningConfig cfg = config_with(testsupport::pick_lambda(seed));
        for (std::size_t p = 1; p <= data.db.period_count(); ++p) {
            PeriodTree tree = PeriodTree::build(data.db, p, data.profits, cfg);
            for (const auto& entry : tree.header()) {
                ChainMass m = chain_mass(tree, entry.item);
                CHECK(m.twu == period_twu({entry.item}, p, data.db, data.profits));
                CHECK(m.twu == entry.twu);
                CHECK(m.util ==
                      periodical_utility({entry.item}, p, data.db, data.profits));
            }
        }
    }
}

TEST_CASE("node-link chains visit every non-root node exactly once") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto data = testsupport::random_db(seed);
        MiningConfig cfg = config_with(testsupport::pick_lambda(seed));
        for (std::size_t p = 1; p <= data.db.period_count(); ++p) {
            PeriodTree tree = PeriodTree::build(data.db, p, data.profits, cfg);
            auto tree_nodes = collect_tree_nodes(tree);
            std::set<const PeriodTree::Node*> chained;
            for (const auto& entry : tree.header()) {
                for (const PeriodTree::Node* n = tree.chain_head(entry.item); n != nullptr;
                     n = n->next_same_item) {
                    CHECK(n->item == entry.item);
                    CHECK(chained.insert(n).second);  // no node twice
                }
            }
            CHECK(chained == tree_nodes);
        }
    }
}

TEST_CASE("random insert/detach churn matches a fresh build") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto data = testsupport::random_db(seed);
        MiningConfig cfg = config_with(testsupport::pick_lambda(seed));
        SplitMix64 rng(seed ^ 0x74726565ull);

        for (std::size_t p = 1; p <= data.db.period_count(); ++p) {
            PeriodTree reference = PeriodTree::build(data.db, p, data.profits, cfg);
            std::vector<std::pair<ItemId, Rational>> header;
            for (const auto& e : reference.header()) header.emplace_back(e.item, e.twu);

            // Start empty; churn transactions in and out; the net view is one
            // copy of every transaction of the period.
            PeriodTree tree(p, reference.pttu(), reference.threshold(), header);
            for (const auto& tr : data.db.period(p)) {
                auto path = tree.sort_transaction_items(tr, data.profits);
                Rational tu = transaction_utility(tr, data.profits);
                tree.insert_path(path, tu);
                const std::uint64_t churns = rng.below(3);
                for (std::uint64_t c = 0; c < churns; ++c) {
                    tree.detach_transaction(path, tu);
                    tree.insert_path(path, tu);
                }
            }
            CHECK(tree.snapshot(data.catalog) == reference.snapshot(data.catalog));
        }
    }
}

TEST_CASE("remove preserves remaining items' total mass") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto data = testsupport::random_db(seed);
        MiningConfig cfg = config_with(Rational(1, 20));
        for (std::size_t p = 1; p <= data.db.period_count(); ++p) {
            PeriodTree tree = PeriodTree::build(data.db, p, data.profits, cfg);
            if (tree.header().size() < 2) continue;
            SplitMix64 rng(seed ^ (p * 0x9e37ull));
            ItemId victim = tree.header()[rng.below(tree.header().size())].item;

            std::map<ItemId, ChainMass> before;
            for (const auto& e : tree.header()) {
                if (e.item != victim) before[e.item] = chain_mass(tree, e.item);
            }
            tree.remove_header_item(victim);
            for (const auto& [item, mass] : before) {
                ChainMass after = chain_mass(tree, item);
                CHECK(after.twu == mass.twu);
                CHECK(after.util == mass.util);
                CHECK(after.count == mass.count);
            }
            // chains stay complete after the splice
            auto tree_nodes = collect_tree_nodes(tree);
            std::set<const PeriodTree::Node*> chained;
            for (const auto& entry : tree.header()) {
                for (const PeriodTree::Node* n = tree.chain_head(entry.item); n != nullptr;
                     n = n->next_same_item) {
                    chained.insert(n);
                }
            }
            CHECK(chained == tree_nodes);
        }
    }
}

TEST_CASE("clone is snapshot-identical and independent") {
    auto f = testsupport::golden();
    PeriodTree tree = PeriodTree::build(f.db, 1, f.profits, config_with(Rational(3, 10)));
    PeriodTree copy = tree.clone();
    CHECK(copy.snapshot(f.catalog) == tree.snapshot(f.catalog));
    copy.remove_header_item(f.C);
    CHECK(copy.snapshot(f.catalog) != tree.snapshot(f.catalog));
    CHECK(tree.in_header(f.C));
}

TEST_SUITE_END();
