#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "markoff/context.hpp"
#include "markoff/core/error.hpp"
#include "markoff/core/linalg.hpp"
#include "markoff/core/matrix.hpp"
#include "markoff/divisibility.hpp"
#include "markoff/mt_matrices.hpp"
#include "markoff/nilpotent.hpp"

namespace markoff {

/// Lower shift: e_21 + e_32.
inline Mat3 shift_matrix() { return unit_matrix(1, 0) + unit_matrix(2, 1); }

/// Antidiagonal ones.
inline Mat3 J_matrix() { return unit_matrix(0, 2) + unit_matrix(1, 1) + unit_matrix(2, 0); }

namespace detail {

inline void require_positive_m(const Arrangement& x) {
    if (x.m() <= 0) throw degenerate_arrangement(x.str() + ": ac - b <= 0");
}

inline Vec3 v3(const BigInt& a, const BigInt& b, const BigInt& c) { return Vec3{Rational(a), Rational(b), Rational(c)}; }

} // namespace detail

/// Columns (c, m, a), ac (ac^2 - bc - a, -c^2, c), ac m (c, -b, a) with m = ac - b.
/// Brings S to the lower shift: S T = T shift.
inline Mat3 T_of(const Arrangement& x) {
    detail::require_positive_m(x);
    const auto& [a, b, c] = x;
    BigInt m = x.m(), ac = a * c;
    return Mat3::from_columns({detail::v3(c, m, a),
                               Rational(ac) * detail::v3(a * c * c - b * c - a, -c * c, c),
                               Rational(ac * m) * detail::v3(c, -b, a)});
}

/// -[ac (ac - b)]^3
inline BigInt T_det_formula(const Arrangement& x) {
    BigInt k = x.a * x.c * x.m();
    return -(k * k * k);
}

struct TFactors {
    Mat3 A, B, C, D;
    Mat3 A_inv;  // closed form, (1/m^2) F K L
    Mat3 F, K, L;
    Mat3 V, V_inv;
    Mat3 U;  // M T
};

inline TFactors T_factors(const Arrangement& x) {
    detail::require_positive_m(x);
    const auto& [a, b, c] = x;
    BigInt m = x.m(), ac = a * c;
    Rational inv_m2 = Rational(1) / Rational(m * m);
    TFactors t;
    t.A = Mat3{{0, Rational(c * m - a), Rational(c)}, {1, Rational(-c * c), Rational(-b)}, {0, Rational(c), Rational(a)}};
    t.B = Mat3::diagonal({Rational(ac), 1, 1});
    t.C = Mat3{{1, 0, 0}, {0, 1, 0}, {1, 0, 1}};
    t.D = Mat3::diagonal({1, Rational(ac), Rational(ac * m)});
    t.A_inv = -inv_m2 * Mat3{{Rational(-c * m), Rational(-m * m), Rational(-a * m)},
                             {Rational(-a), 0, Rational(c)},
                             {Rational(c), 0, Rational(a - c * m)}};
    t.F = Mat3::diagonal({Rational(m), 1, 1});
    t.K = Mat3{{Rational(c), 1, Rational(a)}, {Rational(a), 0, Rational(-c)}, {Rational(-c), 0, Rational(c * m - a)}};
    t.L = Mat3::diagonal({1, Rational(m), 1});
    t.V = Mat3{{Rational(a), Rational(-a), Rational(c)}, {1, 0, Rational(m)}, {0, Rational(c), Rational(a)}};
    t.V_inv = inv_m2 * Mat3{{Rational(c * m), Rational(-b * m), Rational(a * m)},
                            {Rational(a), Rational(-a * a), Rational(a * m - c)},
                            {Rational(-c), Rational(a * c), Rational(-a)}};
    t.U = M_of(x) * T_of(x);
    return t;
}

/// T2 T1^-1
inline Mat3 N_tilde(const PairContext& ctx) { return T_of(ctx.arr2) * inverse3(T_of(ctx.arr1)); }

struct Decompositions {
    Mat3 Gamma0, Gamma1, Gamma2;
    Mat3 Omega0, Omega1;
    Mat3 Theta0, Theta1, Theta2;
    Mat3 Lambda0, Lambda1;
    Mat3 PhiT;  // col(c2,-b2,a2) row(c1,m,a1)
    /// sparse correction in the Omega/Lambda cross identities
    Mat3 Xs;

    Mat3 Omega(const BigInt& m) const { return Omega0 + Rational(m) * Omega1; }
};

inline Decompositions decompositions(const PairContext& ctx) {
    const auto& [a1, b1, c1] = ctx.arr1;
    const auto& [a2, b2, c2] = ctx.arr2;
    const BigInt& m = ctx.m;
    Rational X(a1 * c2 - c1 * a2), Yp(a1 * a2 + c1 * c2), M(m);
    Rational A1(a1), C1(c1), A2(a2), B2(b2), C2(c2);
    Vec3 col2{C2, -B2, A2}, row1{C1, M, A1};

    Decompositions d;
    Mat3 mdiag = M * Mat3::diagonal({A1 * C2, 0, C1 * A2});
    d.Gamma0 = Mat3{{-Yp, 0, -X}, {-X * C2, 0, X * A2}, {X, 0, -Yp}} + mdiag;
    d.Gamma1 = ctx.alpha * outer(col2, row1);
    d.Gamma2 = Mat3::diagonal({0, 1, 0});
    d.Omega0 = Mat3{{X, 0, -Yp}, {-Yp * C2, 0, -X * C2}, {Yp, 0, X}};
    d.Omega1 = Mat3{{0, -A2, 0}, {A1, -C2 * C2, -C1}, {0, C2, 0}} + C2 * Mat3{{C1, M, A1}, {0, 0, 0}, {0, 0, 0}};
    d.PhiT = outer(col2, row1);
    d.Theta0 = Mat3{{-Yp, -X * C2, X}, {0, 0, 0}, {-X, X * A2, -Yp}} + mdiag;
    d.Theta1 = -ctx.alpha * outer(row1, col2);
    d.Theta2 = d.Gamma2;
    d.Lambda0 = Mat3{{-X, X * A2, -Yp}, {0, 0, 0}, {Yp, -Yp * A2, -X}};
    d.Lambda1 = Mat3{{0, -A1, 0}, {A2, -A2 * A2, -C2}, {0, C1, 0}} + A2 * Mat3{{0, 0, C1}, {0, 0, M}, {0, 0, A1}};
    d.Xs = Mat3{{0, C1 * B2, 0}, {0, 0, 0}, {0, A1 * B2, 0}};
    return d;
}

/// Matrix-product side of the five reassembly identities.
struct ReassemblyTargets {
    Mat3 rm2N;      // r m^2 N~
    Mat3 mrS2N;     // m r S2 N~
    Mat3 rS22N;     // r S2^2 N~
    Mat3 m2U1U2;    // r^-1 m^2 U1 U2^-1
    Mat3 mU1shU2;   // r^-1 m U1 shift U2^-1
    Mat3 U1e31U2;   // r^-1 U1 e31 U2^-1
};

inline ReassemblyTargets reassembly_targets(const PairContext& ctx) {
    Mat3 nt = N_tilde(ctx);
    Mat3 s2 = S_of(ctx.arr2);
    Mat3 u1 = M_of(ctx.arr1) * T_of(ctx.arr1);
    Mat3 u2inv = inverse3(M_of(ctx.arr2) * T_of(ctx.arr2));
    Rational m(ctx.m), rinv = Rational(1) / ctx.r;
    return {ctx.r * m * m * nt,
            m * ctx.r * s2 * nt,
            ctx.r * s2 * s2 * nt,
            rinv * m * m * u1 * u2inv,
            rinv * m * u1 * shift_matrix() * u2inv,
            rinv * u1 * unit_matrix(2, 0) * u2inv};
}

// --- the family N(s) --------------------------------------------------------

struct NForms {
    Mat3 left, right, compact;
};

/// r e^{-R2 s/2} N~ - (alpha/m) Phi^t, r N~ e^{-R1 s/2} - (alpha/m) Phi^t and
/// Gamma0/m^2 + Gamma2 + (s/m)(Omega0 + m Omega1) + ((s^2 - s)/2) Phi^t.
inline NForms N_forms(const PairContext& ctx, const Rational& s) {
    Decompositions d = decompositions(ctx);
    Mat3 nt = N_tilde(ctx);
    Rational m(ctx.m);
    Mat3 corr = (ctx.alpha / m) * d.PhiT;
    NForms f;
    f.left = ctx.r * exp_half_R(R_of(ctx.arr2), s) * nt - corr;
    f.right = ctx.r * nt * exp_half_R(R_of(ctx.arr1), s) - corr;
    f.compact = d.Gamma0 * (Rational(1) / (m * m)) + d.Gamma2 + (s / m) * d.Omega(ctx.m) + ((s * s - s) / 2) * d.PhiT;
    return f;
}

/// Compact form only; for inner loops.
inline Mat3 N_compact(const PairContext& ctx, const Decompositions& d, const Rational& s) {
    Rational m(ctx.m);
    return d.Gamma0 * (Rational(1) / (m * m)) + d.Gamma2 + (s / m) * d.Omega(ctx.m) + ((s * s - s) / 2) * d.PhiT;
}

/// N(s) with N(s)^t M2 N(s) = M1; all three forms must agree.
inline Mat3 N_of(const PairContext& ctx, const Rational& s) {
    NForms f = N_forms(ctx, s);
    if (!(f.left == f.right) || !(f.left == f.compact))
        throw internal_inconsistency("N(s) forms disagree for " + ctx.arr1.str() + " / " + ctx.arr2.str());
    return f.compact;
}

/// arr_i for i in {+-1, +-2} over the pair (t1, t2); negative index = reversed.
inline Arrangement indexed_arrangement(const Arrangement& t1, const Arrangement& t2, int i) {
    if (i == 0 || i > 2 || i < -2) throw precondition_failed("index must be in {+-1, +-2}");
    const Arrangement& base = (i == 1 || i == -1) ? t1 : t2;
    return i > 0 ? base : base.reversed();
}

inline PairContext family_context(const Arrangement& t1, const Arrangement& t2, int i, int j) {
    return make_pair_context(indexed_arrangement(t1, t2, i), indexed_arrangement(t1, t2, j));
}

inline Mat3 N_family(const Arrangement& t1, const Arrangement& t2, int i, int j, const Rational& s) {
    return N_of(family_context(t1, t2, i, j), s);
}

// --- parameters -------------------------------------------------------------

struct IsomorphParams {
    Rational s, t;
    friend bool operator==(const IsomorphParams&, const IsomorphParams&) = default;
};

/// t = (s^2 - s)/2 - alpha/m
inline Rational t_constraint(const PairContext& ctx, const Rational& s) {
    return (s * s - s) / 2 - ctx.alpha / Rational(ctx.m);
}

/// Reads (s, t) off T2^-1 Q T1 / r', which must be [[1,0,0],[s,1,0],[t,s,1]].
/// r' = a1 c1 m1 / (a2 c2 m2) reduces to r for a common m. Checks
/// Q^t M2 Q = M1. Does not check the t constraint.
inline IsomorphParams solve_params(const Mat3& Q, const Arrangement& x1, const Arrangement& x2) {
    if (det(Q) != 1) throw precondition_failed("solve_params needs det Q = 1");
    detail::require_positive_m(x1);
    detail::require_positive_m(x2);
    Rational rg = Rational(x1.a * x1.c * x1.m(), x2.a * x2.c * x2.m());
    Mat3 w = inverse3(T_of(x2)) * Q * T_of(x1) * (Rational(1) / rg);
    bool toeplitz = w(0, 0) == 1 && w(1, 1) == 1 && w(2, 2) == 1 && w(0, 1).is_zero() && w(0, 2).is_zero() &&
                    w(1, 2).is_zero() && w(1, 0) == w(2, 1);
    if (!toeplitz) throw not_an_isomorph("matrix is not in the family E + s S2 + t S2^2");
    if (!(Q.transpose() * M_of(x2) * Q == M_of(x1))) throw not_an_isomorph("Q^t M2 Q != M1");
    return {w(1, 0), w(2, 0)};
}

/// Common-m version; additionally enforces t = (s^2 - s)/2 - alpha/m.
inline IsomorphParams solve_params(const Mat3& Q, const PairContext& ctx) {
    IsomorphParams p = solve_params(Q, ctx.arr1, ctx.arr2);
    if (p.t != t_constraint(ctx, p.s)) throw not_an_isomorph("t violates the s-constraint");
    return p;
}

// --- integral members ---------------------------------------------------------

/// Denominator of the integral parameter of N_(i,j) by the sign pattern of ij.
/// ij in {1, 4}: 3.  ij in {-1, -4}: 9 frak_m.  ij = 2: 9 g.  ij = -2: 9 f.
struct ParameterShape {
    BigInt denominator;
    BigInt core;  // n should be prime to this: frak_m, g, f, or 1
};

inline ParameterShape parameter_shape(int i, int j, const BigInt& frak_m, const BigInt& f, const BigInt& g) {
    int ij = i * j;
    switch (ij) {
        case 1: case 4: return {3, 1};
        case -1: case -4: return {9 * frak_m, frak_m};
        case 2: return {9 * g, g};
        case -2: return {9 * f, f};
    }
    throw precondition_failed("index product out of range");
}

struct IntegralParameter {
    Rational s;
    BigInt n, denominator, core;
    BigInt gcd_core;  // gcd(n, core)
    bool coprime = false;
    Mat3 N;
    /// n c + 2 a = 0 (mod m) with (a,_,c) = arr1 of the context; reported only.
    bool s_congruence = false;
};

namespace detail {

/// Integrality test for s = n/K on the compact form, written per entry as
/// (A0 + A1 n + A2 n^2) / D with integers.
struct IntegralityScanner {
    struct Entry {
        BigInt A0, A1, A2, D;
    };
    std::vector<Entry> entries;

    IntegralityScanner(const PairContext& ctx, const BigInt& K) {
        Decompositions d = decompositions(ctx);
        Rational m(ctx.m), k(K);
        Mat3 c0 = d.Gamma0 * (Rational(1) / (m * m)) + d.Gamma2;
        Mat3 c1 = d.Omega(ctx.m) * (Rational(1) / (m * k)) - d.PhiT * (Rational(1) / (Rational(2) * k));
        Mat3 c2 = d.PhiT * (Rational(1) / (Rational(2) * k * k));
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                BigInt D;
                mpz_lcm(D.get_mpz_t(), c0(i, j).den().get_mpz_t(), c1(i, j).den().get_mpz_t());
                mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), c2(i, j).den().get_mpz_t());
                Rational dd(D);
                entries.push_back({(c0(i, j) * dd).to_integer(), (c1(i, j) * dd).to_integer(),
                                   (c2(i, j) * dd).to_integer(), D});
            }
    }

    bool integral_at(const BigInt& n) const {
        BigInt v;
        for (const auto& e : entries) {
            if (e.D == 1) continue;
            v = (e.A2 * n + e.A1) * n + e.A0;
            if (!divides(e.D, v)) return false;
        }
        return true;
    }
};

} // namespace detail

/// Smallest |n| >= 1 (positive first) with N(n/K) integral; K from `shape`.
/// max_numerator = 0 means one full period (K itself).
inline IntegralParameter find_integral_parameter(const PairContext& ctx, const ParameterShape& shape,
                                                 const BigInt& max_numerator = 0) {
    detail::IntegralityScanner scan(ctx, shape.denominator);
    const BigInt limit = max_numerator == 0 ? shape.denominator : max_numerator;
    for (BigInt n = 1; n <= limit; ++n) {
        for (int sign : {1, -1}) {
            BigInt sn = sign * n;
            if (!scan.integral_at(sn)) continue;
            IntegralParameter out;
            out.n = sn;
            out.denominator = shape.denominator;
            out.core = shape.core;
            out.s = Rational(sn, shape.denominator);
            out.gcd_core = gcd(sn, shape.core);
            out.coprime = out.gcd_core == 1;
            out.N = N_of(ctx, out.s);
            if (!is_integral(out.N)) throw internal_inconsistency("scanner and N_of disagree on integrality");
            out.s_congruence = divides(ctx.m, BigInt(sn * ctx.arr1.c + 2 * ctx.arr1.a));
            return out;
        }
    }
    throw not_found("no integral member with |n| <= " + to_string(limit) + " over denominator " +
                    to_string(shape.denominator));
}

/// Scan for N_(i,j) over the pair (t1, t2); f, g come from the (1,2) context.
/// max_numerator = 0 means one full period (the denominator itself).
inline IntegralParameter find_integral_parameter(const Arrangement& t1, const Arrangement& t2, int i, int j,
                                                 const BigInt& max_numerator = 0) {
    PairContext base = make_pair_context(t1, t2);
    FGFactorization fg = fg_factorization(base);
    ParameterShape shape = parameter_shape(i, j, base.frak_m, fg.f, fg.g);
    PairContext ctx = family_context(t1, t2, i, j);
    return find_integral_parameter(ctx, shape, max_numerator);
}

// --- endgame replay -------------------------------------------------------------

struct FrakDecomposition {
    Mat3 A, B, C, D;
    Mat3 lhs;          // m^2 N(s-)
    Mat3 C_displayed;  // the closed form with f g, for comparison
    BigInt n_plus, n_minus, n2;
    Rational s2;
    Rational u, w;  // 3 m s+, 3 m s2
    bool even = false;
    bool reassembles = false;
    bool C_matches_display = false;
    bool uw_match_n = false;  // u = k n+ g and w = k n2 (k = 1 odd, 2 even)
    // congruence verdicts
    bool hypothesis_A = false;  // g^2 | a1 a2 - c1 c2
    bool A_zero_mod_g2 = false;
    bool B_zero_mod_g2 = false;
    bool C_zero_mod_g = false;
    bool D_zero_mod_g = false;
    bool lhs_zero_mod_g = false;
    bool lhs_equals_D_mod_g = false;
    bool N22_integral = false;
    /// the proof's chain closes: every premise verified and D != 0 mod g
    bool contradiction = false;
};

/// m^2 N(s-) = A + B + C + D with s+ = n+/(9f), s- = n-/(9g), s2 = s+ - s-.
/// C is the residual written with u = 3 m s+ and w = 3 m s2.
inline FrakDecomposition frak_decomposition(const PairContext& ctx, const Rational& s_plus, const Rational& s_minus,
                                            const BigInt& f, const BigInt& g, bool even_adjust = false) {
    FrakDecomposition out;
    out.even = ctx.even();
    if (out.even && !even_adjust) throw parity_error("m = " + to_string(ctx.m) + " is even; request the factor-2 adjustment");
    Rational np = s_plus * Rational(9 * f), nm = s_minus * Rational(9 * g);
    if (!np.is_integer() || !nm.is_integer())
        throw non_integral_parameter("9 f s+ = " + np.str() + ", 9 g s- = " + nm.str());
    out.n_plus = np.to_integer();
    out.n_minus = nm.to_integer();
    out.n2 = out.n_plus * g - out.n_minus * f;
    out.s2 = s_plus - s_minus;

    Decompositions d = decompositions(ctx);
    Rational m(ctx.m), third = Rational(1, 3);
    Mat3 omega = d.Omega(ctx.m);
    out.u = Rational(3) * m * s_plus;
    out.w = Rational(3) * m * out.s2;
    const Rational &u = out.u, &w = out.w;

    out.A = m * m * N_compact(ctx, d, out.s2);
    out.B = (Rational(1, 2) * (u * u / 9 - u * m / 3)) * d.PhiT;
    out.C = (third * u) * (omega - (w / 3) * d.PhiT) - (Rational(2, 3) * w * m) * d.Omega1 + (w * m / 3) * d.PhiT;
    out.D = (-Rational(2) * w / 3) * d.Omega0;
    out.lhs = m * m * N_of(ctx, s_minus);
    out.reassembles = out.lhs == out.A + out.B + out.C + out.D;

    Rational n2(out.n2), fg(f * g);
    out.C_displayed = (third * Rational(out.n_plus * g)) * (omega - (n2 / 3) * d.PhiT) -
                      (Rational(2) * fg * n2) * d.Omega1 + (n2 * fg) * d.PhiT;
    out.C_matches_display = out.C_displayed == out.C;
    BigInt kappa = out.even ? 2 : 1;
    out.uw_match_n = u == Rational(kappa * out.n_plus * g) && w == Rational(kappa * out.n2);

    BigInt g2 = g * g;
    out.hypothesis_A = divides(g2, ctx.Y());
    out.A_zero_mod_g2 = is_zero_mod(out.A, g2);
    out.B_zero_mod_g2 = is_zero_mod(out.B, g2);
    out.C_zero_mod_g = is_zero_mod(out.C, g);
    out.D_zero_mod_g = is_zero_mod(out.D, g);
    out.lhs_zero_mod_g = is_zero_mod(out.lhs, g);
    out.lhs_equals_D_mod_g = residues_defined(out.lhs, g) && residues_defined(out.D, g) && congruent_mod(out.lhs, out.D, g);
    PairContext c22 = make_pair_context(ctx.arr2, ctx.arr2.reversed());
    out.N22_integral = is_integral(N_of(c22, out.s2));
    out.contradiction = out.hypothesis_A && out.A_zero_mod_g2 && out.B_zero_mod_g2 && out.C_zero_mod_g &&
                        out.lhs_zero_mod_g && !out.D_zero_mod_g;
    return out;
}

/// Signed involution J_i = J N_(i,-i)(0) on the pair.
inline Mat3 J_involution(const Arrangement& t1, const Arrangement& t2, int i) {
    return J_matrix() * N_family(t1, t2, i, -i, Rational(0));
}

} // namespace markoff
