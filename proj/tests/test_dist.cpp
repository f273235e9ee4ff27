#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "plambda/encodings.hpp"
#include "plambda/subdist.hpp"

using namespace plambda;

namespace {

Dyadic d(std::uint64_t num, std::uint64_t exp) { return Dyadic(BigInt(num), exp); }

const Term V = enc::tt();
const Term W = enc::ff();
const Term U = enc::identity();

SubDist dist(std::initializer_list<std::pair<Term, Dyadic>> xs) {
    SubDist out;
    for (const auto& [v, m] : xs) out.add(v, m);
    return out;
}

}  // namespace

TEST(Dyadic, Normalisation) {
    Dyadic x(BigInt(12), 4);
    EXPECT_EQ(x.numerator(), 3);
    EXPECT_EQ(x.exponent(), 2u);
    EXPECT_EQ(Dyadic(BigInt(0), 9).exponent(), 0u);
    EXPECT_EQ(Dyadic(BigInt(8), 3), Dyadic::one());
}

TEST(Dyadic, Arithmetic) {
    EXPECT_EQ(d(1, 1) + d(1, 2), d(3, 2));
    EXPECT_EQ(d(3, 2) - d(1, 1), d(1, 2));
    EXPECT_EQ(d(3, 2) * d(1, 3), d(3, 5));
    EXPECT_EQ(d(3, 2).half(), d(3, 3));
    EXPECT_EQ(Dyadic(6).half(), Dyadic(3));
    EXPECT_THROW(d(1, 2) - d(1, 1), InvariantViolation);
    EXPECT_LT(d(1, 3), d(1, 2));
    EXPECT_GT(Dyadic::one(), d(255, 8));
}

TEST(Dyadic, ExactAtLargeExponents) {
    Dyadic tiny = Dyadic::pow2(300);
    Dyadic sum = Dyadic::one() - tiny;
    EXPECT_EQ(sum + tiny, Dyadic::one());
    EXPECT_EQ(tiny.str(), "1/2^300");
    EXPECT_EQ(d(3, 2).str(), "3/4");
    EXPECT_EQ(Dyadic::one().str(), "1");
    EXPECT_DOUBLE_EQ(d(3, 2).to_double(), 0.75);
    EXPECT_GT(tiny.to_double(), 0.0);
}

TEST(Dyadic, BinaryDigits) {
    EXPECT_EQ(binary_digits(d(3, 2), 4), "1100");
    EXPECT_EQ(binary_digits(d(1, 3), 2), "00");
    EXPECT_EQ(binary_digits(Dyadic::one(), 3), "111");
    EXPECT_EQ(binary_digits(Dyadic::zero(), 3), "000");
    EXPECT_EQ(from_binary_digits("101"), d(5, 3));
    EXPECT_THROW(binary_digits(Dyadic(2), 3), InvariantViolation);
}

TEST(Combine, ChoiceOfTwoValues) {
    auto r = combine({{d(1, 1), SubDist::point(V)}, {d(1, 1), SubDist::point(W)}});
    EXPECT_EQ(r, dist({{V, d(1, 1)}, {W, d(1, 1)}}));
}

TEST(Combine, CollisionsMerge) {
    auto r = combine({{d(1, 1), SubDist::point(V)}, {d(1, 1), SubDist::point(V)}});
    EXPECT_EQ(r, SubDist::point(V));
}

TEST(Combine, EmptyHalf) {
    auto r = combine({{d(1, 1), SubDist{}}, {d(1, 1), SubDist::point(U)}});
    EXPECT_EQ(r, dist({{U, d(1, 1)}}));
}

TEST(Combine, RejectsOverweight) {
    EXPECT_THROW(combine({{Dyadic::one(), SubDist::point(V)}, {d(1, 1), SubDist{}}}), InvariantViolation);
    EXPECT_THROW(combine({{Dyadic::one(), SubDist::point(V)}, {Dyadic::one(), SubDist::point(W)}}), InvariantViolation);
}

TEST(SubDist, OrderMassScale) {
    EXPECT_TRUE(leq(SubDist{}, dist({{V, d(1, 1)}})));
    EXPECT_EQ(mass(dist({{V, d(1, 1)}, {W, d(1, 2)}})), d(3, 2));
    EXPECT_EQ(scale_by_mass(dist({{V, d(1, 1)}}), d(1, 1)), dist({{V, d(1, 2)}}));
    EXPECT_FALSE(leq(dist({{V, d(1, 1)}}), dist({{W, d(1, 1)}})));
}

TEST(SubDist, KeysAreAlphaClasses) {
    SubDist a;
    a.add(lam("x", var("x")), d(1, 1));
    EXPECT_EQ(a.at(lam("y", var("y"))), d(1, 1));
}

TEST(SubDist, RejectsNonValuesAndDropsZero) {
    SubDist a;
    EXPECT_THROW(a.add(enc::omega(), d(1, 1)), InvariantViolation);
    a.add(V, Dyadic::zero());
    EXPECT_TRUE(a.empty());
}

// -- properties ------------------------------------------------------------

namespace {

std::vector<Term> pool() { return {enc::tt(), enc::ff(), enc::identity(), enc::nat(1), enc::nat(2), enc::delta()}; }

SubDist random_dist(std::mt19937_64& rng) {
    auto vs = pool();
    std::uniform_int_distribution<int> count(0, 4);
    std::uniform_int_distribution<std::size_t> which(0, vs.size() - 1);
    std::uniform_int_distribution<std::uint64_t> num(0, 15);
    SubDist out;
    Dyadic left = Dyadic::one();
    for (int i = count(rng); i > 0; --i) {
        Dyadic m = Dyadic(BigInt(num(rng)), 4) * left;
        out.add(vs[which(rng)], m);
        left -= m;
    }
    out.check();
    return out;
}

}  // namespace

TEST(DistProperties, CombineIsCommutativeAndAssociative) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 300; ++i) {
        SubDist a = random_dist(rng), b = random_dist(rng), c = random_dist(rng);
        Dyadic h = d(1, 1), q = d(1, 2);
        EXPECT_EQ(combine({{h, a}, {h, b}}), combine({{h, b}, {h, a}}));
        auto left = combine({{h, combine({{h, a}, {h, b}})}, {h, c}});
        auto right = combine({{q, a}, {q, b}, {h, c}});
        EXPECT_EQ(left, right);
        std::vector<std::pair<Dyadic, SubDist>> parts{{q, a}, {q, b}, {h, c}};
        std::shuffle(parts.begin(), parts.end(), rng);
        EXPECT_EQ(combine(parts), right);
        EXPECT_EQ(mass(right), q * mass(a) + q * mass(b) + h * mass(c));
    }
}

TEST(DistProperties, LeqIsAPartialOrderAndMeetIsGlb) {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 300; ++i) {
        SubDist a = random_dist(rng), b = random_dist(rng), c = random_dist(rng);
        EXPECT_TRUE(leq(a, a));
        if (leq(a, b) && leq(b, a)) EXPECT_EQ(a, b);
        if (leq(a, b) && leq(b, c)) EXPECT_TRUE(leq(a, c));
        SubDist m = meet(a, b);
        EXPECT_NO_THROW(m.check());
        EXPECT_TRUE(leq(m, a));
        EXPECT_TRUE(leq(m, b));
        SubDist lower = meet(m, c);
        EXPECT_TRUE(leq(lower, meet(a, b)));
    }
}
