#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "markoff/context.hpp"
#include "markoff/core/error.hpp"
#include "markoff/core/rational.hpp"

namespace markoff {

struct CrossIdentity {
    BigInt lhs;  // (a1c2 - c1a2)(a1a2 - c1c2)
    BigInt rhs;  // m^2 (b1 - b2)
    bool holds() const { return lhs == rhs; }
};

inline CrossIdentity cross_identity(const PairContext& ctx) {
    return {ctx.X() * ctx.Y(), ctx.m * ctx.m * (ctx.arr1.b - ctx.arr2.b)};
}

// --- factorization --------------------------------------------------------

namespace detail {

inline BigInt powmod(const BigInt& b, const BigInt& e, const BigInt& n) {
    BigInt r;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool miller_rabin_round(const BigInt& n, const BigInt& d, unsigned long s, const BigInt& a) {
    BigInt x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (unsigned long i = 1; i < s; ++i) {
        x = x * x % n;
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace detail

/// Miller-Rabin; deterministic below 3.3e24 (first 13 prime bases), 40-round
/// probabilistic above.
inline bool is_prime(const BigInt& n) {
    if (n < 2) return false;
    static const unsigned small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
    for (unsigned p : small) {
        if (n == p) return true;
        if (divides(BigInt(p), n)) return false;
    }
    static const BigInt det_limit("3317044064679887385961981");
    if (n >= det_limit) return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
    BigInt d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    for (unsigned p : small)
        if (!detail::miller_rabin_round(n, d, s, BigInt(p))) return false;
    return true;
}

namespace detail {

/// Brent's cycle variant on n < 2^63 with 128-bit products.
inline std::uint64_t brent_rho_u64(std::uint64_t n) {
    using u128 = unsigned __int128;
    auto gcd64 = [](std::uint64_t a, std::uint64_t b) {
        while (b) a %= b, std::swap(a, b);
        return a;
    };
    for (std::uint64_t c = 1;; ++c) {
        auto f = [&](std::uint64_t v) { return static_cast<std::uint64_t>((static_cast<u128>(v) * v + c) % n); };
        std::uint64_t y = 2, x = 0, ys = 0, g = 1, q = 1;
        const std::uint64_t block = 128;
        for (std::uint64_t r = 1; g == 1; r *= 2) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = f(y);
            for (std::uint64_t k = 0; k < r && g == 1; k += block) {
                ys = y;
                for (std::uint64_t i = 0; i < std::min(block, r - k); ++i) {
                    y = f(y);
                    q = static_cast<std::uint64_t>(static_cast<u128>(q) * (x > y ? x - y : y - x) % n);
                }
                g = gcd64(q, n);
            }
        }
        if (g == n) {
            do {
                ys = f(ys);
                g = gcd64(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

/// A nontrivial factor of the odd composite n (Brent's cycle variant).
inline BigInt brent_rho(const BigInt& n) {
    if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 62) return BigInt(static_cast<unsigned long>(brent_rho_u64(n.get_ui())));
    const mpz_srcptr N = n.get_mpz_t();
    mpz_class y, x, ys, g, q, d;
    auto f = [&](mpz_class& v, unsigned long c) {
        mpz_mul(v.get_mpz_t(), v.get_mpz_t(), v.get_mpz_t());
        mpz_add_ui(v.get_mpz_t(), v.get_mpz_t(), c);
        mpz_mod(v.get_mpz_t(), v.get_mpz_t(), N);
    };
    for (unsigned long c = 1;; ++c) {
        y = 2, g = 1, q = 1;
        const unsigned long block = 128;
        for (unsigned long r = 1; g == 1; r *= 2) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) f(y, c);
            for (unsigned long k = 0; k < r && g == 1; k += block) {
                ys = y;
                for (unsigned long i = 0; i < std::min(block, r - k); ++i) {
                    f(y, c);
                    mpz_sub(d.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
                    mpz_mul(q.get_mpz_t(), q.get_mpz_t(), d.get_mpz_t());
                    mpz_mod(q.get_mpz_t(), q.get_mpz_t(), N);
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), N);
            }
        }
        if (g == n) {
            do {
                f(ys, c);
                mpz_sub(d.get_mpz_t(), x.get_mpz_t(), ys.get_mpz_t());
                mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), N);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

inline void split(const BigInt& n, std::map<BigInt, unsigned>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    BigInt d = brent_rho(n);
    split(d, out);
    split(exact_div(n, d), out);
}

} // namespace detail

/// Prime factorization of n >= 1: trial division up to 10^6, then rho.
inline std::map<BigInt, unsigned> factorize(const BigInt& n) {
    if (n < 1) throw precondition_failed("factorize needs n >= 1");
    std::map<BigInt, unsigned> out;
    BigInt rest = n;
    for (unsigned long p = 2; p <= 1000000UL; p += (p == 2 ? 1 : 2)) {
        if (BigInt(p) * p > rest) break;
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            ++out[BigInt(p)];
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
        }
    }
    detail::split(rest, out);
    return out;
}

// --- f g split --------------------------------------------------------------

/// Which side takes q^l when q divides both cross terms (only when X = Y = 0).
enum class TieRule { prefer_f, prefer_g };

struct FGFactorization {
    BigInt m, frak_m;
    BigInt f = 1, g = 1;
    /// 2,3-part of frak_m, excluded from the split.
    BigInt residual = 1;
    BigInt X, Y;
    bool degenerate = false;  // X = Y = 0
    /// prime -> exponent, and the side it went to
    std::vector<std::pair<BigInt, unsigned>> f_primes, g_primes;

    bool invariants_hold() const {
        if (f * g * residual != frak_m) return false;
        if (gcd(f, g) != 1) return false;
        if (!divides(BigInt(f * f), X) || !divides(BigInt(g * g), Y)) return false;
        if (Y != 0 && gcd(f, Y) != 1) return false;
        if (X != 0 && gcd(g, X) != 1) return false;
        return true;
    }
};

inline FGFactorization fg_factorization(const PairContext& ctx, TieRule tie = TieRule::prefer_f) {
    FGFactorization out;
    out.m = ctx.m;
    out.frak_m = ctx.frak_m;
    out.X = ctx.X();
    out.Y = ctx.Y();
    out.degenerate = out.X == 0 && out.Y == 0;
    out.residual = ctx.frak_m;
    for (const auto& [q, l] : factorize(ctx.frak_m)) {
        if (q == 2 || q == 3) continue;
        BigInt ql = pow(q, l);
        BigInt q2l = ql * ql;
        bool to_f = tie == TieRule::prefer_f ? divides(q, out.X) : !divides(q, out.Y);
        if (to_f) {
            if (!divides(q2l, out.X))
                throw lemma_violation(to_string(q) + "^" + std::to_string(2 * l) + " does not divide X = " + to_string(out.X));
            out.f *= ql;
            out.f_primes.push_back({q, l});
        } else {
            if (!divides(q2l, out.Y))
                throw lemma_violation(to_string(q) + "^" + std::to_string(2 * l) + " does not divide Y = " + to_string(out.Y));
            out.g *= ql;
            out.g_primes.push_back({q, l});
        }
        out.residual = exact_div(out.residual, ql);
    }
    return out;
}

// --- lemma audit ------------------------------------------------------------

enum class Verdict { holds, fails, hypothesis_not_met };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::fails: return "fails";
        case Verdict::hypothesis_not_met: return "hypothesis-not-met";
    }
    return "?";
}

struct PrimeAudit {
    BigInt q;
    unsigned l = 0;
    bool split_aa = true;  // q misses one of a1a2 +- c1c2
    bool split_ac = true;  // q misses one of a1c2 +- c1a2
    bool x_iff_yplus = true;
    bool y_iff_xplus = true;
    bool square_split = true;

    bool all() const { return split_aa && split_ac && x_iff_yplus && y_iff_xplus && square_split; }
};

struct LemmaAudit {
    BigInt m, X, Y, Yplus, Xplus;
    std::vector<PrimeAudit> primes;
    Verdict prime_split = Verdict::holds, x_iff_yplus = Verdict::holds, y_iff_xplus = Verdict::holds,
            square_split = Verdict::holds, size_bound = Verdict::hypothesis_not_met;
    std::string size_bound_detail;

    bool ok() const {
        for (Verdict v : {prime_split, x_iff_yplus, y_iff_xplus, square_split, size_bound})
            if (v == Verdict::fails) return false;
        return true;
    }
};

namespace detail {

inline bool has_prime_beyond_3(const BigInt& n) {
    for (const auto& [q, l] : factorize(abs(n)))
        if (q != 2 && q != 3) return true;
    return false;
}

} // namespace detail

/// Checks the prime-splitting lemmas for each prime q | m, q not in {2,3}, and
/// evaluates the size lemma on (f, g) when its hypothesis holds.
inline LemmaAudit lemma_audit(const PairContext& ctx) {
    LemmaAudit rep;
    rep.m = ctx.m;
    rep.X = ctx.X();
    rep.Y = ctx.Y();
    const auto &x1 = ctx.arr1, &x2 = ctx.arr2;
    rep.Yplus = x1.a * x2.a + x1.c * x2.c;
    rep.Xplus = x1.a * x2.c + x1.c * x2.a;
    auto fail_if = [](Verdict& v, bool ok) {
        if (!ok) v = Verdict::fails;
    };
    for (const auto& [q, l] : factorize(ctx.m)) {
        if (q == 2 || q == 3) continue;
        PrimeAudit pa;
        pa.q = q;
        pa.l = l;
        pa.split_aa = !(divides(q, rep.Yplus) && divides(q, rep.Y));
        pa.split_ac = !(divides(q, rep.Xplus) && divides(q, rep.X));
        pa.x_iff_yplus = divides(q, rep.X) == divides(q, rep.Yplus);
        pa.y_iff_xplus = divides(q, rep.Y) == divides(q, rep.Xplus);
        BigInt q2l = pow(q, 2 * l);
        pa.square_split = divides(q2l, rep.X) || divides(q2l, rep.Y);
        fail_if(rep.prime_split, pa.split_aa && pa.split_ac);
        fail_if(rep.x_iff_yplus, pa.x_iff_yplus);
        fail_if(rep.y_iff_xplus, pa.y_iff_xplus);
        fail_if(rep.square_split, pa.square_split);
        rep.primes.push_back(pa);
    }
    if (!ctx.disjoint()) {
        rep.size_bound = Verdict::hypothesis_not_met;
        rep.size_bound_detail = "{a1,c1} and {a2,c2} intersect";
    } else if (!ctx.dominant) {
        rep.size_bound = Verdict::hypothesis_not_met;
        rep.size_bound_detail = "m is not the dominant member";
    } else {
        FGFactorization fg = fg_factorization(ctx);
        bool ok = detail::has_prime_beyond_3(fg.f) && detail::has_prime_beyond_3(fg.g);
        rep.size_bound = ok ? Verdict::holds : Verdict::fails;
        rep.size_bound_detail = "f = " + to_string(fg.f) + ", g = " + to_string(fg.g);
    }
    return rep;
}

} // namespace markoff
