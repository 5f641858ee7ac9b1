#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "classdeg/errors.hpp"
#include "classdeg/factor_code.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

#include <random>
#include <set>

using namespace classdeg;

namespace {

const char *const kFixtures[] = {"fix_a", "fix_b", "fix_c", "fix_d", "fix_e", "fix_g"};

std::set<Symbol> as_set(const SymbolSet &s) {
    auto m = members(s);
    return {m.begin(), m.end()};
}

}  // namespace

TEST_CASE("apply_code") {
    auto b = fixture("fix_b");
    CHECK(apply_code(b, xw(b, "aba")) == yw(b, "000"));
    auto a = fixture("fix_a");
    CHECK(apply_code(a, xw(a, "010")) == yw(a, "010"));
    auto g = fixture("fix_g");
    CHECK(apply_code(g, xw(g, "ppq")) == yw(g, "000"));
    Block blk{xw(g, "pqt"), 5};
    CHECK(apply_code(g, blk).start_index == 5);
    CHECK_THROWS_AS(apply_code(a, xw(a, "11")), InputError);
}

TEST_CASE("preimage profiles") {
    auto a = fixture("fix_a");
    auto pa = preimage_profile(a, yw(a, "010"), 1);
    CHECK(as_set(pa.symbols) == std::set<Symbol>{1});
    CHECK(pa.d() == 1);

    auto b = fixture("fix_b");
    CHECK(preimage_profile(b, yw(b, "000"), 1).d() == 2);

    auto g = fixture("fix_g");
    // Inside 000 the symbol q can only sit at the last coordinate.
    CHECK(as_set(preimage_profile(g, yw(g, "000"), 1).symbols) == std::set<Symbol>{0});
    CHECK(as_set(preimage_profile(g, yw(g, "000"), 2).symbols) == std::set<Symbol>{0, 1});
    CHECK(as_set(preimage_profile(g, yw(g, "000"), 0).symbols) == std::set<Symbol>{0});

    CHECK(preimage_profile(a, yw(a, "11"), 0).d() == 0);
    CHECK_THROWS_AS(preimage_profile(a, yw(a, "01"), 2), InputError);
}

TEST_CASE("preimage profiles agree with explicit enumeration") {
    for (const char *name : kFixtures) {
        auto t = fixture(name);
        for (int n = 1; n <= 5; ++n) {
            for (const auto &w : oracle::image_blocks(t, n)) {
                for (int i = 0; i < n; ++i)
                    CHECK(as_set(preimage_profile(t, w, i).symbols) == oracle::profile(t, w, i));
            }
        }
    }
}

TEST_CASE("profiles never grow when the block is extended") {
    std::mt19937 rng(11);
    for (const char *name : kFixtures) {
        auto t = fixture(name);
        for (int n = 1; n <= 4; ++n) {
            for (const auto &w : oracle::image_blocks(t, n)) {
                for (Symbol c = 0; c < t.y_size(); ++c) {
                    Word right = w, left{c};
                    right.push_back(c);
                    left.insert(left.end(), w.begin(), w.end());
                    for (int i = 0; i < n; ++i) {
                        auto base = preimage_profile(t, w, i).symbols;
                        CHECK(preimage_profile(t, right, i).symbols.is_subset_of(base));
                        CHECK(preimage_profile(t, left, i + 1).symbols.is_subset_of(base));
                    }
                }
            }
        }
    }
}

TEST_CASE("d_star examples") {
    CHECK(d_star(fixture("fix_a")).value == 1);
    CHECK(d_star(fixture("fix_b")).value == 2);
    CHECK(d_star(fixture("fix_c")).value == 2);
}

TEST_CASE("d_star witness attains the value and matches exhaustive search") {
    for (const char *name : kFixtures) {
        auto t = fixture(name);
        auto m = d_star(t);
        CHECK(preimage_profile(t, m.w, m.index).d() == m.value);
        CHECK(m.value == oracle::min_d(t, 8));
    }
}

TEST_CASE("d_star matches exhaustive search on random triples") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        auto t = oracle::random_triple(rng, 5, 3, 0.4);
        auto m = d_star(t);
        CHECK(preimage_profile(t, m.w, m.index).d() == m.value);
        CHECK(m.value == oracle::min_d(t, 7));
    }
}

TEST_CASE("finite-to-one detection") {
    CHECK(is_finite_to_one(fixture("fix_a")));
    CHECK(is_finite_to_one(fixture("fix_b")));
    CHECK(is_finite_to_one(fixture("fix_g")));
    CHECK_FALSE(is_finite_to_one(fixture("fix_d")));
    CHECK_FALSE(is_finite_to_one(fixture("fix_e")));
    auto c = fixture("fix_c");
    auto diamond = find_diamond(c);
    REQUIRE(diamond);
    CHECK(diamond->first != diamond->second);
    CHECK(diamond->first.front() == diamond->second.front());
    CHECK(diamond->first.back() == diamond->second.back());
    CHECK(apply_code(c, diamond->first) == apply_code(c, diamond->second));
}

TEST_CASE("diamonds agree with preimage counts of long blocks") {
    // A diamond exists iff some block has two preimages with equal endpoints.
    std::mt19937 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        auto t = oracle::random_triple(rng, 4, 2, 0.45);
        bool pair_found = false;
        const int length = t.x_size() * t.x_size() + 2;
        for (const auto &w : oracle::image_blocks(t, std::min(length, 8))) {
            std::set<std::pair<Symbol, Symbol>> ends;
            for (const auto &u : oracle::preimages(t, w))
                pair_found = pair_found || !ends.emplace(u.front(), u.back()).second;
        }
        if (length <= 8)
            CHECK(pair_found == !is_finite_to_one(t));
        else if (pair_found)
            CHECK_FALSE(is_finite_to_one(t));
    }
}

TEST_CASE("degree") {
    CHECK(degree(fixture("fix_a")).value == 1);
    CHECK(degree(fixture("fix_b")).value == 2);
    CHECK(degree(fixture("fix_g")).value == 1);
    CHECK_THROWS_WITH_AS(degree(fixture("fix_c")), "degree undefined (infinite-to-one)", PreconditionError);
    auto split = parse_triple("xsymbols: a b c\nmap: a>0 b>1 c>0\nedges: a>a b>b c>c\n");
    CHECK_THROWS_AS(degree(split), PreconditionError);
}

TEST_CASE("strict degree demands an irreducible X") {
    // A two-cycle and a disjoint loop, all over the fixed point 0^inf.
    auto t = parse_triple("xsymbols: a b c\nmap: a>0 b>0 c>0\nedges: a>b b>a c>c\n");
    CHECK(is_finite_to_one(t));
    CHECK(degree(t).value == 3);
    CHECK_THROWS_AS(degree(t, true), PreconditionError);
}

TEST_CASE("degree is invariant under higher block recoding") {
    for (const char *name : {"fix_a", "fix_b", "fix_g"}) {
        auto t = fixture(name);
        for (int n : {2, 3})
            CHECK(degree(higher_block(t, n).triple).value == degree(t).value);
    }
}

TEST_CASE("the two preimages of the fixed point are separated") {
    auto t = fixture("fix_b");
    auto x1 = PeriodicPoint(xw(t, "ab")), x2 = PeriodicPoint(xw(t, "ba"));
    for (int k = -4; k <= 4; ++k)
        CHECK(x1.at(k) != x2.at(k));
    CHECK(oracle::periodic_preimages(t, yw(t, "00"), 2).size() == 2);
}

TEST_CASE("image irreducibility") {
    for (const char *name : kFixtures)
        CHECK(is_image_irreducible(fixture(name)));
    auto split = parse_triple("xsymbols: a b\nmap: a>0 b>1\nedges: a>a b>b\n");
    CHECK_FALSE(is_image_irreducible(split));
    // Reducible X with irreducible image: the second loop only repeats a word of the first.
    auto covered = parse_triple("xsymbols: a b c\nmap: a>0 b>1 c>0\nedges: a>b b>a a>a c>c\n");
    CHECK(is_image_irreducible(covered));
}

TEST_CASE("sofic image presentations") {
    auto b = sofic_image(fixture("fix_b"));
    CHECK(b.presentation.x_size() == 1);
    CHECK(b.presentation.x().transition_count() == 1);
    CHECK(b.irreducible);

    auto a = sofic_image(fixture("fix_a"));
    CHECK(a.presentation.x_size() == 2);
    CHECK(a.presentation.x().transition_count() == 3);
}

TEST_CASE("sofic image accepts exactly the image blocks") {
    std::mt19937 rng(3);
    std::vector<FactorTriple> cases;
    for (const char *name : kFixtures)
        cases.push_back(fixture(name));
    for (int trial = 0; trial < 30; ++trial)
        cases.push_back(oracle::random_triple(rng, 5, 2, 0.35));
    for (const auto &t : cases) {
        auto img = sofic_image(t);
        for (int n = 1; n <= 5; ++n) {
            std::set<Word> accepted;
            for (const auto &blk : enumerate_blocks(img.presentation.x(), n))
                accepted.insert(apply_code(img.presentation, blk.symbols));
            auto expected = oracle::image_blocks(t, n);
            CHECK(accepted == std::set<Word>(expected.begin(), expected.end()));
        }
    }
}
