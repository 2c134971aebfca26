#include <gtest/gtest.h>

#include <random>

#include "markoff/context.hpp"
#include "markoff/divisibility.hpp"
#include "markoff/isomorph.hpp"
#include "markoff/verify.hpp"
#include "oracles.hpp"

using namespace markoff;
using oracle::int_matrix;

namespace {

const Arrangement k336{3, 3, 6}, k633{6, 3, 3};
const Arrangement k3615{3, 6, 15}, k1563{15, 6, 3};

bool is_family_member(const Mat3& n, const PairContext& ctx) {
    return n.transpose() * M_of(ctx.arr2) * n == M_of(ctx.arr1) && oracle::leibniz_det(n) == 1;
}

// Scan s = n/D in the same order as the library, testing integrality directly.
std::optional<Rational> first_integral(const PairContext& ctx, const BigInt& D, const BigInt& core, long max) {
    for (long k = 1; k <= max; ++k)
        for (long n : {k, -k}) {
            if (gcd(BigInt(n), core) != 1) continue;
            Rational s(BigInt(n), D);
            if (is_integral(N_of(ctx, s))) return s;
        }
    return std::nullopt;
}

} // namespace

TEST(T, Examples) {
    Mat3 t = T_of({3, 3, 3});
    EXPECT_EQ(t, int_matrix({{3, 135, 162}, {6, -81, -162}, {3, 27, 162}}));
    EXPECT_EQ(oracle::leibniz_det(t), -157464);
    EXPECT_EQ(T_det_formula({3, 3, 3}), -157464);
    Mat3 t6 = T_of(k336);
    EXPECT_EQ(t6.column(0), (Vec3{6, 15, 3}));
    EXPECT_EQ(oracle::leibniz_det(t6), Rational(BigInt(-270 * 270 * 270)));
    EXPECT_THROW(T_of({3, 9, 3}), degenerate_arrangement);
}

TEST(T, Factors) {
    auto f = T_factors({3, 3, 3});
    EXPECT_EQ(f.B, Mat3::diagonal({9, 1, 1}));
    EXPECT_EQ(f.D, Mat3::diagonal({1, 9, 54}));
    EXPECT_EQ(f.A * f.B * f.C * f.D, T_of({3, 3, 3}));
    auto g = T_factors(k336);
    EXPECT_EQ(g.V * g.V_inv, Mat3::identity());
}

TEST(T, IdentitiesOnSweep) {
    for (const auto& tr : enumerate_below(BigInt(1000)))
        for (const auto& mt : mt_arrangements(tr)) {
            const Arrangement& x = mt.arr();
            Mat3 T = T_of(x);
            EXPECT_EQ(S_of(x) * T, T * shift_matrix()) << x.str();
            EXPECT_EQ(oracle::leibniz_det(T), T_det_formula(x));
            auto f = T_factors(x);
            EXPECT_EQ(f.A * f.B * f.C * f.D, T);
            EXPECT_EQ(f.A * f.A_inv, Mat3::identity());
            EXPECT_EQ(f.A_inv, (Rational(1) / Rational(x.m() * x.m())) * f.F * f.K * f.L);
            EXPECT_EQ(f.U, f.V * f.B * f.C * f.D);
            EXPECT_EQ(f.V * f.V_inv, Mat3::identity());
        }
}

TEST(Context, Examples) {
    auto c = make_pair_context(k336, k633);
    EXPECT_EQ(c.m, 15);
    EXPECT_EQ(c.r, 1);
    EXPECT_EQ(c.alpha, 0);
    EXPECT_EQ(c.frak_m, 5);
    auto d = make_pair_context(k3615, k1563);
    EXPECT_EQ(d.m, 39);
    EXPECT_EQ(d.frak_m, 13);
    auto e = make_pair_context(k336, k336);
    EXPECT_EQ(e.m, 15);
    EXPECT_TRUE(e.identical());
    EXPECT_THROW(make_pair_context(k336, k3615), mismatched_dominant);
    EXPECT_THROW(make_pair_context({3, 3, 3}, {3, 3, 3}), excluded_root);
    EXPECT_THROW(make_pair_context({3, 4, 6}, k633), invalid_triple);
    EXPECT_NO_THROW(make_automorph_context({3, 3, 3}));
}

TEST(Decompositions, Examples) {
    auto ctx = make_pair_context(k336, k633);
    auto d = decompositions(ctx);
    EXPECT_TRUE(d.Gamma1.is_zero());
    EXPECT_EQ(d.PhiT, int_matrix({{18, 45, 9}, {-18, -45, -9}, {36, 90, 18}}));
    EXPECT_EQ(d.Gamma2, Mat3::diagonal({0, 1, 0}));
    EXPECT_EQ(d.Theta2, Mat3::diagonal({0, 1, 0}));
    EXPECT_EQ(d.Gamma0.transpose(), d.Theta0);
    EXPECT_EQ(d.Gamma2.transpose(), d.Theta2);
}

TEST(Family, Examples) {
    auto same = make_pair_context(k336, k336);
    EXPECT_EQ(N_of(same, Rational(0)), Mat3::identity());
    auto ctx = make_pair_context(k336, k633);
    Mat3 q = N_of(ctx, Rational(1, 2));
    EXPECT_TRUE(is_family_member(q, ctx));
    auto ext = make_automorph_context({3, 3, 3});
    EXPECT_EQ(N_of(ext, Rational(2, 3)), int_matrix({{6, 8, 3}, {-3, -3, -1}, {1, 0, 0}}));
    EXPECT_EQ(N_of(ext, Rational(2, 3)), exp_half_R(R_of(3, 3, 3), Rational(2, 3)));
}

TEST(Family, IndexCalculus) {
    EXPECT_EQ(N_family(k336, k633, 1, 1, Rational(0)), Mat3::identity());
    Rational s(1, 3);
    EXPECT_EQ(N_family(k336, k633, -1, 1, s), inverse3(N_family(k336, k633, 1, -1, -s)));
    Rational a(1, 4), b(1, 5);
    EXPECT_EQ(N_family(k336, k633, 1, 1, a + b), N_family(k336, k633, -1, 1, a) * N_family(k336, k633, 1, -1, b));
    for (int i : {1, -1, 2, -2}) {
        Mat3 J = J_involution(k3615, k1563, i);
        EXPECT_EQ(J * J, Mat3::identity());
    }
}

TEST(Family, IsomorphOnRandomParameters) {
    std::mt19937_64 rng(21);
    for (const auto& p : realizable_pairs(BigInt(10000)))
        for (const auto& ctx : permuted_contexts(p))
            for (int k = 0; k < 4; ++k) {
                Rational s = random_rational(rng);
                NForms f = N_forms(ctx, s);
                EXPECT_EQ(f.left, f.right);
                EXPECT_EQ(f.left, f.compact);
                EXPECT_TRUE(is_family_member(f.compact, ctx)) << ctx.arr1.str() << "/" << ctx.arr2.str() << " s=" << s;
                EXPECT_EQ(solve_params(f.compact, ctx), (IsomorphParams{s, t_constraint(ctx, s)}));
            }
}

TEST(Family, FormalContextWithRNotOne) {
    // arrangements with b largest share ac - b = 15
    auto ctx = make_pair_context({3, 102, 39}, {6, 507, 87});
    EXPECT_EQ(ctx.r, Rational(13, 58));
    EXPECT_EQ(ctx.m, 15);
    EXPECT_FALSE(ctx.dominant);
    for (Rational s : {Rational(0), Rational(1, 7), Rational(-5, 3)}) {
        Mat3 n = N_of(ctx, s);
        EXPECT_TRUE(is_family_member(n, ctx));
        EXPECT_EQ(solve_params(n, ctx).s, s);
    }
    Tally t;
    std::mt19937_64 rng(2);
    detail::check_context(ctx, rng, t);
    for (const auto& st : t.stats()) EXPECT_EQ(st.failures, 0u) << st.name << ": " << st.counterexample;
}

TEST(Solve, Examples) {
    auto same = make_pair_context(k336, k336);
    EXPECT_EQ(solve_params(Mat3::identity(), same), (IsomorphParams{0, 0}));
    auto ext = make_automorph_context({3, 3, 3});
    EXPECT_EQ(solve_params(int_matrix({{6, 8, 3}, {-3, -3, -1}, {1, 0, 0}}), ext), (IsomorphParams{Rational(2, 3), Rational(-1, 9)}));
    auto ctx = make_pair_context(k336, k633);
    Mat3 q = tree_isomorph(MTMatrix::from(k633), MTMatrix::from(k336));
    IsomorphParams p = solve_params(q, ctx);
    EXPECT_EQ(p.t, t_constraint(ctx, p.s));
    EXPECT_EQ(p.s, Rational(-1, 15));
}

TEST(Solve, Rejections) {
    auto ctx = make_pair_context(k336, k633);
    Mat3 q = N_of(ctx, Rational(1, 3));
    Mat3 e = Mat3::identity();
    e(0, 1) = Rational(1);
    EXPECT_THROW(solve_params(q * e, ctx), not_an_isomorph);
    EXPECT_THROW(solve_params(Mat3::identity() * Rational(2), ctx), precondition_failed);
    EXPECT_THROW(solve_params(Mat3::identity(), ctx), not_an_isomorph);
}

TEST(Integral, AutomorphExample) {
    auto ext = make_automorph_context({3, 3, 3});
    auto ip = find_integral_parameter(ext, parameter_shape(1, 1, ext.frak_m, 1, 1), 0);
    EXPECT_EQ(ip.s, Rational(1, 3));
    EXPECT_EQ(ip.N, int_matrix({{3, 3, 1}, {-1, 0, 0}, {0, -1, 0}}));
}

TEST(Integral, PairExamples) {
    auto a = find_integral_parameter(k336, k633, 1, -1);
    EXPECT_EQ(a.denominator, 45);
    EXPECT_EQ(gcd(a.n, BigInt(5)), 1);
    EXPECT_TRUE(is_integral(a.N));
    auto b = find_integral_parameter(k336, k633, 1, 2);
    EXPECT_EQ(b.denominator, 45);
    EXPECT_TRUE(b.coprime);
}

TEST(Integral, MatchesDirectScan) {
    for (const auto& p : realizable_pairs(BigInt(2000))) {
        auto fg = fg_factorization(p.context(1, 2));
        for (int i : {1, -1, 2, -2})
            for (int j : {1, -1, 2, -2}) {
                auto ctx = family_context(p.p1, p.p2, i, j);
                auto shape = parameter_shape(i, j, ctx.frak_m, fg.f, fg.g);
                auto ip = find_integral_parameter(ctx, shape, 0);
                auto direct = first_integral(ctx, shape.denominator, shape.core, shape.denominator.get_si());
                ASSERT_TRUE(direct.has_value());
                EXPECT_EQ(ip.s, *direct) << p.child.str() << " (" << i << "," << j << ")";
                EXPECT_TRUE(ip.coprime);
            }
    }
}

TEST(Integral, NotFoundWhenRangeTooSmall) {
    auto ctx = make_pair_context(k3615, k1563);
    // s = +-1/819 is not integral
    EXPECT_THROW(find_integral_parameter(ctx, ParameterShape{BigInt(117 * 7), BigInt(1)}, 1), not_found);
}

TEST(Frak, M15Example) {
    auto ctx = make_pair_context(k336, k633);
    auto fg = fg_factorization(ctx);
    ASSERT_EQ(fg.f, 1);
    ASSERT_EQ(fg.g, 5);
    auto sp = find_integral_parameter(k336, k633, 2, -1);
    auto sm = find_integral_parameter(k336, k633, 1, 2);
    auto fd = frak_decomposition(ctx, sp.s, sm.s, fg.f, fg.g);
    EXPECT_TRUE(fd.reassembles);
    EXPECT_TRUE(fd.C_matches_display);
    EXPECT_FALSE(fd.contradiction);
}

TEST(Frak, VanishingParameters) {
    auto ctx = make_pair_context(k336, k633);
    auto fd = frak_decomposition(ctx, Rational(0), Rational(0), 1, 5);
    EXPECT_EQ(fd.n2, 0);
    EXPECT_TRUE(fd.D.is_zero());
    EXPECT_EQ(fd.lhs, fd.A + fd.B + fd.C);
}

TEST(Frak, Errors) {
    RealizablePair p = realizable_pair(MarkoffTriple::from(3, 39, 102));
    PairContext c = p.context(1, 2);
    ASSERT_TRUE(c.even());
    EXPECT_THROW(frak_decomposition(c, Rational(0), Rational(0), 1, 17), parity_error);
    EXPECT_NO_THROW(frak_decomposition(c, Rational(0), Rational(0), 1, 17, true));
    auto ctx = make_pair_context(k336, k633);
    EXPECT_THROW(frak_decomposition(ctx, Rational(1, 7), Rational(0), 1, 5), non_integral_parameter);
}

TEST(Frak, EveryPairBelow1000) {
    for (const auto& p : realizable_pairs(BigInt(1000))) {
        auto ctx = p.context(1, 2);
        auto fg = fg_factorization(ctx);
        auto sp = find_integral_parameter(p.p1, p.p2, 2, -1);
        auto sm = find_integral_parameter(p.p1, p.p2, 1, 2);
        auto fd = frak_decomposition(ctx, sp.s, sm.s, fg.f, fg.g, true);
        EXPECT_TRUE(fd.reassembles) << p.child.str();
        EXPECT_TRUE(fd.uw_match_n) << p.child.str();
        EXPECT_FALSE(fd.contradiction) << p.child.str();
        if (!ctx.even()) {
            EXPECT_TRUE(fd.C_matches_display) << p.child.str();
        }
    }
}
