#include <gtest/gtest.h>

#include <random>

#include "markoff/core/error.hpp"
#include "markoff/core/linalg.hpp"
#include "oracles.hpp"

using namespace markoff;
using oracle::int_matrix;

namespace {

Mat3 random_matrix(std::mt19937_64& rng, long span) {
    std::uniform_int_distribution<long> num(-span, span), den(1, 7);
    Mat3 m;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) m(i, j) = Rational(BigInt(num(rng)), BigInt(den(rng)));
    return m;
}

} // namespace

TEST(Rational, CanonicalForm) {
    Rational r(BigInt(6), BigInt(-4));
    EXPECT_EQ(r.num(), -3);
    EXPECT_EQ(r.den(), 2);
    EXPECT_TRUE(r.is_canonical());
    EXPECT_EQ(r.str(), "-3/2");
    EXPECT_EQ(Rational::parse("10/5"), Rational(2));
    EXPECT_EQ(Rational::parse("-7"), Rational(-7));
}

TEST(Rational, Errors) {
    EXPECT_THROW(Rational(BigInt(1), BigInt(0)), division_by_zero);
    EXPECT_THROW(Rational(1) / Rational(0), division_by_zero);
    EXPECT_THROW(Rational::parse("1/x"), parse_error);
    EXPECT_THROW(Rational::parse("1/0"), division_by_zero);
    EXPECT_THROW(parse_bigint(""), parse_error);
}

TEST(Rational, FieldAxiomsOnRandomValues) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> d(-50, 50), e(1, 30);
    for (int k = 0; k < 200; ++k) {
        Rational a(BigInt(d(rng)), BigInt(e(rng))), b(BigInt(d(rng)), BigInt(e(rng))), c(BigInt(d(rng)), BigInt(e(rng)));
        EXPECT_EQ((a + b) * c, a * c + b * c);
        EXPECT_EQ(a - a, Rational(0));
        if (!b.is_zero()) {
            EXPECT_EQ(a / b * b, a);
        }
        EXPECT_TRUE((a * b).is_canonical());
    }
}

TEST(BigIntHelpers, Basics) {
    EXPECT_EQ(gcd(BigInt(-12), BigInt(18)), 6);
    EXPECT_TRUE(divides(BigInt(5), BigInt(0)));
    EXPECT_FALSE(divides(BigInt(0), BigInt(5)));
    EXPECT_EQ(pow(BigInt(10), 12), BigInt("1000000000000"));
    EXPECT_EQ(exact_div(BigInt(39), BigInt(3)), 13);
}

TEST(Linalg, DetMatchesLeibniz) {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
        Mat3 m = random_matrix(rng, 20);
        EXPECT_EQ(det(m), oracle::leibniz_det(m));
    }
}

TEST(Linalg, InverseExamples) {
    EXPECT_EQ(inverse3(Mat3::identity()), Mat3::identity());
    EXPECT_EQ(inverse3(int_matrix({{1, 3, 3}, {0, 1, 3}, {0, 0, 1}})), int_matrix({{1, -3, 6}, {0, 1, -3}, {0, 0, 1}}));
    Mat3 d = int_matrix({{2, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    Mat3 expect = Mat3::identity();
    expect(0, 0) = Rational(1, 2);
    EXPECT_EQ(inverse3(d), expect);
    EXPECT_THROW(inverse3(Mat3::zero()), singular_matrix);
}

TEST(Linalg, InverseProperty) {
    std::mt19937_64 rng(12);
    for (int k = 0; k < 200; ++k) {
        Mat3 m = random_matrix(rng, 9);
        if (det(m).is_zero()) continue;
        EXPECT_EQ(m * inverse3(m), Mat3::identity());
        EXPECT_EQ(inverse3(m) * m, Mat3::identity());
    }
}

TEST(Linalg, CharPolyMatchesDeterminantSamples) {
    std::mt19937_64 rng(13);
    for (int k = 0; k < 100; ++k) {
        Mat3 m = random_matrix(rng, 12);
        CharPoly3 p = char_poly3(m);
        for (long l = -2; l <= 2; ++l) {
            Rational x(l);
            Rational val = p.c3 * x * x * x + p.c2 * x * x + p.c1 * x + p.c0;
            EXPECT_EQ(val, oracle::det_shifted(m, x));
        }
        // Cayley-Hamilton
        Mat3 ch = m * m * m * p.c3 + m * m * p.c2 + m * p.c1 + Mat3::identity() * p.c0;
        EXPECT_TRUE(ch.is_zero());
    }
    EXPECT_EQ(char_poly3(Mat3::zero()), (CharPoly3{-1, 0, 0, 0}));
}

TEST(Linalg, Rank) {
    EXPECT_EQ(rank3(Mat3::zero()), 0);
    EXPECT_EQ(rank3(Mat3::identity()), 3);
    EXPECT_EQ(rank3(int_matrix({{1, 2, 3}, {2, 4, 6}, {0, 0, 0}})), 1);
    EXPECT_EQ(rank3(int_matrix({{1, 2, 3}, {0, 1, 0}, {1, 3, 3}})), 2);
}

TEST(Linalg, ExpHalfRMatchesSeries) {
    Mat3 R = int_matrix({{-9, -12, -3}, {3, 0, -3}, {3, 12, 9}});
    for (Rational s : {Rational(0), Rational(1), Rational(2, 3), Rational(-5, 7), Rational(11, 3)}) {
        Mat3 series = oracle::exp_series(R * (-s / 2), 6);
        EXPECT_EQ(exp_half_R(R, s), series) << s;
    }
    EXPECT_EQ(exp_half_R(R, Rational(0)), Mat3::identity());
    EXPECT_EQ(exp_half_R(R, Rational(1)), int_matrix({{10, 15, 6}, {-6, -8, -3}, {3, 3, 1}}));
    EXPECT_EQ(exp_half_R(R, Rational(2, 3)), int_matrix({{6, 8, 3}, {-3, -3, -1}, {1, 0, 0}}));
    EXPECT_THROW(exp_half_R(Mat3::identity(), Rational(1)), not_nilpotent);
}

TEST(Linalg, ExpHalfRIsAGroupLaw) {
    Mat3 R = int_matrix({{-9, -12, -3}, {3, 0, -3}, {3, 12, 9}});
    std::mt19937_64 rng(14);
    std::uniform_int_distribution<long> d(-30, 30), e(1, 12);
    for (int k = 0; k < 50; ++k) {
        Rational s(BigInt(d(rng)), BigInt(e(rng))), t(BigInt(d(rng)), BigInt(e(rng)));
        EXPECT_EQ(exp_half_R(R, s) * exp_half_R(R, t), exp_half_R(R, s + t));
    }
}

TEST(Linalg, Congruences) {
    Mat3 m = int_matrix({{6, 9, 3}, {0, 3, -3}, {0, 0, 12}});
    EXPECT_TRUE(is_zero_mod(m, BigInt(3)));
    EXPECT_FALSE(is_zero_mod(m, BigInt(9)));
    Mat3 half = m * Rational(1, 2);
    EXPECT_TRUE(residues_defined(half, BigInt(3)));
    EXPECT_TRUE(is_zero_mod(half, BigInt(3)));
    EXPECT_FALSE(residues_defined(m * Rational(1, 9), BigInt(3)));
    EXPECT_TRUE(congruent_mod(m, m + Mat3::identity() * Rational(5), BigInt(5)));
}
