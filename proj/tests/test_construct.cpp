/*
 * test_construct.cpp -- dense-sequence plans, the l_k selection rule,
 * index families, block assembly, and the relaxed-scale expansion oracles
 * that cross-check the block-norm calculus against exact integration.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <set>
#include <string>
#include <vector>

#include "fhharm/construct.hpp"
#include "fhharm/spheremeans.hpp"

using namespace fhharm;

namespace {

Polynomial var(unsigned nvars, unsigned axis) { return Polynomial::variable(nvars, axis); }

EllSequence hand_ell(std::vector<unsigned long> ls) {
    EllSequence e;
    e.C = rat(1);
    e.c_prime = rat(2);
    e.ell = std::move(ls);
    return e;
}

}  // namespace

TEST_CASE("scale thresholds") {
    CHECK(Scale::literal().threshold(5) == 50);
    CHECK(Scale::literal().threshold(21) == 210);
    CHECK(Scale::relaxed_at(2).threshold(5) == 2);
    CHECK(std::string(Scale::literal().name()) == "literal");
    CHECK(std::string(Scale::relaxed_at(2).name()) == "relaxed");
}

TEST_CASE("default dense sequence: enumeration order and plan contents") {
    DensePlan plan = default_dense_sequence(3, 1, 2);
    // basis sizes 1 + 3 + 5, each with both signs at height 1
    CHECK(plan.cycle() == 18);
    CHECK(plan.generators[0].F == Polynomial::constant(3, rat(1)));
    CHECK(plan.generators[1].F == Polynomial::constant(3, rat(-1)));
    CHECK(plan.generators[2].F == var(3, 1));
    CHECK(plan.generators[3].F == -var(3, 1));

    std::set<std::string> texts;
    for (const auto& g : plan.generators) {
        CHECK(g.N == 3);
        CHECK(g.m <= 2);
        CHECK(g.norm2 == m2_mean_squared(g.F, rat(1)));
        texts.insert(to_text(g.F));
    }
    CHECK(texts.size() == 18);  // all distinct

    REQUIRE(plan.growth.size() == 3);  // one constant per degree 0..2
    CHECK(plan.growth[0].c_squared == 1);
    CHECK(plan.growth[1].c_squared == 3);
    CHECK(plan.growth[2].c_squared == 60);

    // cycling: entry k and k + cycle share the generator
    CHECK(plan.entry(1).F == plan.entry(19).F);
    CHECK(plan.entry(2).m == 0);
    CHECK(plan.entry(3).m == 1);
    CHECK_THROWS_AS(plan.entry(0), std::invalid_argument);

    // deterministic rebuild
    DensePlan again = default_dense_sequence(3, 1, 2);
    REQUIRE(again.cycle() == plan.cycle());
    for (std::size_t i = 0; i < plan.generators.size(); ++i) {
        CHECK(again.generators[i].F == plan.generators[i].F);
    }

    CHECK_THROWS_AS(default_dense_sequence(1, 1, 2), std::invalid_argument);
    CHECK_THROWS_AS(default_dense_sequence(3, 0, 2), std::invalid_argument);
}

TEST_CASE("ell selection: frozen default sequence and the rule's shape") {
    DensePlan plan = default_dense_sequence(3, 1, 2);
    EllSequence ell = select_ell(plan, rat(1), 4);
    CHECK(ell.ell == std::vector<unsigned long>{5, 9, 21, 39});
    CHECK(ell.C == 1);
    CHECK(ell.c_prime == plan.c_prime);
    CHECK(ell.k_max() == 4);
    CHECK(ell.at(2) == 9);
    CHECK_THROWS_AS(ell.at(0), std::invalid_argument);
    CHECK_THROWS_AS(ell.at(5), std::invalid_argument);

    for (unsigned long k = 1; k <= 4; ++k) CHECK(ell.at(k) % 2 == 1);
    for (unsigned long k = 1; k < 4; ++k) CHECK(ell.at(k) < ell.at(k + 1));

    // smaller C costs a larger l_1 (the geometric budget tightens)
    EllSequence tight = select_ell(plan, rat(1, 2), 1);
    CHECK(tight.at(1) > ell.at(1));

    EllSequence empty = select_ell(plan, rat(1), 0);
    CHECK(empty.k_max() == 0);

    // an oversized C' overflows the representable cap
    DensePlan big = default_dense_sequence(3, 1, 2);
    big.c_prime = Rational(Int(3000000000L));
    CHECK_THROWS_AS(select_ell(big, rat(1), 1), std::domain_error);
    CHECK_THROWS_AS(select_ell(plan, rat(0), 1), std::invalid_argument);
}

TEST_CASE("index families A_k and admitted orders B_{n,k}") {
    DensePlan plan = default_dense_sequence(3, 1, 2);
    EllSequence ell = select_ell(plan, rat(1), 4);

    CHECK(index_set_A(1, ell, 100) == std::vector<unsigned long>{10, 30, 50, 70, 90});
    CHECK(index_set_A(2, ell, 200) == std::vector<unsigned long>{36, 108, 180});
    CHECK(index_set_A(1, ell, 9).empty());

    // families are pairwise disjoint
    std::set<unsigned long> seen;
    std::size_t total = 0;
    for (unsigned long k = 1; k <= 4; ++k) {
        auto a = index_set_A(k, ell, 5000);
        total += a.size();
        seen.insert(a.begin(), a.end());
    }
    CHECK(seen.size() == total);

    auto b = index_set_B(50, 1, ell, Scale::literal());
    REQUIRE(b.size() == 10);
    CHECK(b.front() == 2505);
    CHECK(b.back() == 2550);

    CHECK(index_set_B(10, 1, ell, Scale::relaxed_at(2)) ==
          std::vector<unsigned long>{105, 110});

    CHECK_THROWS_AS(index_set_B(10, 1, ell, Scale::literal()), std::invalid_argument);
    CHECK_THROWS_AS(index_set_B(20, 1, ell, Scale::literal()), std::invalid_argument);
}

TEST_CASE("blocks: ownership, orders, degree interval") {
    DensePlan plan = default_dense_sequence(3, 1, 2);
    EllSequence ell = select_ell(plan, rat(1), 4);

    CHECK(block_Q(15, plan, ell).zero());               // odd
    CHECK(block_Q(0, plan, ell).zero());                // zero index
    CHECK(block_Q(20, plan, ell).zero());               // owned by no family
    CHECK(block_Q(10, plan, ell, Scale::literal()).zero());  // below threshold

    BlockQ q = block_Q(10, plan, ell, Scale::relaxed_at(2));
    REQUIRE_FALSE(q.zero());
    CHECK(q.k == 1);
    CHECK(q.m == 1);
    CHECK(q.base == &plan.generators[0]);
    CHECK(q.orders == std::vector<unsigned long>{105, 110});
    CHECK(q.deg_lo == 100);
    CHECK(q.deg_hi == 110);
    auto ts = q.terms();
    REQUIRE(ts.size() == 2);
    CHECK(ts[0].n == 105);
    CHECK(ts[1].base == q.base);

    BlockQ lit = block_Q(90, plan, ell, Scale::literal());
    REQUIRE_FALSE(lit.zero());
    CHECK(lit.k == 1);
    CHECK(lit.m == 5);
    CHECK(lit.orders.size() == 18);
    CHECK(lit.deg_lo == 8100);

    DegreeInterval di = degree_interval(90, plan, ell, Scale::literal());
    CHECK(di.lo == 8100);
    CHECK(di.hi == lit.deg_hi);
    CHECK_THROWS_AS(degree_interval(15, plan, ell), std::invalid_argument);
}

TEST_CASE("truncated assembly: block list, disjoint degrees, additive norms") {
    DensePlan plan = default_dense_sequence(3, 1, 2);
    EllSequence ell = select_ell(plan, rat(1), 4);

    TruncatedH h = assemble_truncated(plan, ell, 120, Scale::literal());
    std::vector<unsigned long> ns;
    for (const auto& b : h.blocks) ns.push_back(b.n);
    CHECK(ns == std::vector<unsigned long>{50, 70, 90, 108, 110});
    for (std::size_t i = 0; i + 1 < h.blocks.size(); ++i) {
        CHECK(h.blocks[i].deg_hi < h.blocks[i + 1].deg_lo);
    }

    // norm2 is the orthogonal sum over the retained primitive terms
    Rational manual(0);
    for (const auto& b : h.blocks) {
        for (const auto& t : b.terms()) manual += block_norm_squared(t, rat(1, 3));
    }
    CHECK(h.norm2(rat(1, 3)) == manual);

    TruncatedH none = assemble_truncated(plan, ell, 40, Scale::literal());
    CHECK(none.blocks.empty());
    CHECK(none.norm2(rat(2)) == 0);
    CHECK(none.norm2_f(BigFloat(2)).is_zero());
}

TEST_CASE("expansion oracle: assembled truncation vs exact integration") {
    DensePlan plan = default_dense_sequence(3, 1, 2);
    EllSequence e1 = hand_ell({1});

    TruncatedH h = assemble_truncated(plan, e1, 7, Scale::relaxed_at(2));
    REQUIRE(h.blocks.size() == 2);  // n = 2 and n = 6
    CHECK(h.blocks[0].orders == std::vector<unsigned long>{5, 6});
    CHECK(h.blocks[1].orders.size() == 6);  // 37..42

    Polynomial full = expand_truncated(h);
    for (const Rational& r : {rat(1), rat(2, 3)}) {
        CHECK(h.norm2(r) == m2_mean_squared(full, r));
    }

    // per-block as well
    for (const auto& b : h.blocks) {
        Polynomial qb = expand_block(b);
        Rational manual(0);
        for (const auto& t : b.terms()) manual += block_norm_squared(t, rat(1, 2));
        CHECK(m2_mean_squared(qb, rat(1, 2)) == manual);
    }
}

TEST_CASE("expansion guards and primitive expansion identities") {
    DensePlan plan = default_dense_sequence(3, 1, 2);

    // d^n/dx1^n of the expansion returns the generator
    const DecomposedPoly& gx = plan.generators[2];  // x1
    Polynomial p5 = expand_primitive_term(PrimitiveTerm{5, &gx});
    CHECK(differentiate(p5, 1, 5) == gx.F);
    CHECK(block_norm_squared(PrimitiveTerm{5, &gx}, rat(3, 2)) ==
          m2_mean_squared(p5, rat(3, 2)));

    // literal-scale degrees refuse to expand
    CHECK_THROWS_AS(expand_primitive_term(PrimitiveTerm{70, &gx}), std::domain_error);
    CHECK_THROWS_AS(expand_primitive_term(PrimitiveTerm{5, nullptr}), std::invalid_argument);
}

TEST_CASE("plan JSON: round trip, revalidation, tamper rejection") {
    DensePlan plan = default_dense_sequence(3, 1, 2);
    EllSequence ell = select_ell(plan, rat(1), 4);
    std::string text = plan_to_json(plan, ell);

    auto [plan2, ell2] = plan_from_json(text);
    CHECK(plan2.N == 3);
    CHECK(plan2.cycle() == 18);
    CHECK(ell2.ell == ell.ell);
    CHECK(plan2.c_prime == plan.c_prime);
    CHECK(plan_to_json(plan2, ell2) == text);  // byte-identical re-serialization

    std::string pretty = plan_to_json(plan, ell, true);
    CHECK(pretty != text);
    auto [plan3, ell3] = plan_from_json(pretty);
    CHECK(plan_to_json(plan3, ell3) == text);

    auto tampered = [&](auto mutate) {
        nlohmann::json j = nlohmann::json::parse(text);
        mutate(j);
        return j.dump();
    };
    // stored constant disagrees with recomputation
    CHECK_THROWS_AS(plan_from_json(tampered([](nlohmann::json& j) {
                        j["entries"][0]["c_squared"] = "2";
                    })),
                    std::invalid_argument);
    // even l_k violates the growth rule
    CHECK_THROWS_AS(plan_from_json(tampered([](nlohmann::json& j) {
                        j["ell"][0] = 4;
                        j["entries"][0]["ell"] = 4;
                    })),
                    std::invalid_argument);
    // odd l_k below the growth rule
    CHECK_THROWS_AS(plan_from_json(tampered([](nlohmann::json& j) {
                        j["ell"][0] = 3;
                        j["entries"][0]["ell"] = 3;
                    })),
                    std::invalid_argument);
    // stored entry inconsistent with the ell list
    CHECK_THROWS_AS(plan_from_json(tampered([](nlohmann::json& j) {
                        j["entries"][0]["ell"] = 7;
                    })),
                    std::invalid_argument);
    // unknown container format
    CHECK_THROWS_AS(plan_from_json(tampered([](nlohmann::json& j) {
                        j["format"] = "fhharm-plan-999";
                    })),
                    std::invalid_argument);
    // generator outside the declared degree cap
    CHECK_THROWS_AS(plan_from_json(tampered([](nlohmann::json& j) {
                        j["degree_cap"] = 1;
                    })),
                    std::invalid_argument);
    // nonpositive constants
    CHECK_THROWS_AS(plan_from_json(tampered([](nlohmann::json& j) {
                        j["c_prime"] = "0";
                    })),
                    std::invalid_argument);
    CHECK_THROWS_AS(plan_from_json(tampered([](nlohmann::json& j) {
                        j["C"] = "-1";
                    })),
                    std::invalid_argument);
    CHECK_THROWS_AS(plan_from_json("{}"), std::exception);
}
