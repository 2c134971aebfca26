#pragma once

#include <string>
#include <vector>

#include "markoff/core/error.hpp"
#include "markoff/core/rational.hpp"
#include "markoff/mt_matrices.hpp"
#include "markoff/tree.hpp"

namespace markoff {

/// Two arrangements (a_i, b_i, c_i) with a common m = a_i c_i - b_i.
struct PairContext {
    Arrangement arr1, arr2;
    BigInt m;
    Rational r;      // a1 c1 / (a2 c2)
    Rational alpha;  // 1/(a2 c2) - 1/(a1 c1)
    BigInt frak_m;   // m/3 (m odd) or m/6 (m even)
    /// m exceeds every entry of both arrangements, i.e. m is the dominant
    /// member of the child triples. False for formally built contexts.
    bool dominant = true;
    /// Built by make_automorph_context (arr1 == arr2, root exclusion bypassed).
    bool automorph = false;

    bool even() const { return mpz_even_p(m.get_mpz_t()) != 0; }
    bool identical() const { return arr1 == arr2; }
    /// {a1, c1} = {a2, c2}
    bool permuted() const {
        return (arr1.a == arr2.a && arr1.c == arr2.c) || (arr1.a == arr2.c && arr1.c == arr2.a);
    }
    /// {a1, c1} and {a2, c2} share no element.
    bool disjoint() const {
        for (const BigInt* p : {&arr1.a, &arr1.c})
            if (*p == arr2.a || *p == arr2.c) return false;
        return true;
    }
    /// a1 c2 - c1 a2
    BigInt X() const { return arr1.a * arr2.c - arr1.c * arr2.a; }
    /// a1 a2 - c1 c2
    BigInt Y() const { return arr1.a * arr2.a - arr1.c * arr2.c; }
};

namespace detail {

inline BigInt frak_of(const BigInt& m) {
    BigInt k = mpz_even_p(m.get_mpz_t()) ? BigInt(6) : BigInt(3);
    if (!divides(k, m)) throw precondition_failed("m = " + to_string(m) + " is not divisible by " + to_string(k));
    return exact_div(m, k);
}

inline PairContext build_context(const Arrangement& x1, const Arrangement& x2) {
    PairContext ctx;
    ctx.arr1 = x1;
    ctx.arr2 = x2;
    ctx.m = x1.m();
    BigInt p1 = x1.a * x1.c, p2 = x2.a * x2.c;
    if (p1 == 0 || p2 == 0) throw degenerate_arrangement("a c = 0");
    ctx.r = Rational(p1, p2);
    ctx.alpha = Rational(1, p2) - Rational(1, p1);
    ctx.frak_m = frak_of(ctx.m);
    ctx.dominant = ctx.m > x1.max() && ctx.m > x2.max();
    return ctx;
}

inline void require_markoff(const Arrangement& x) {
    if (!x.is_markoff()) throw invalid_triple(x.str() + " is not a Markoff arrangement");
}

} // namespace detail

inline PairContext make_pair_context(const Arrangement& x1, const Arrangement& x2) {
    detail::require_markoff(x1);
    detail::require_markoff(x2);
    if (x1.m() != x2.m())
        throw mismatched_dominant("a1c1-b1 = " + to_string(x1.m()) + " but a2c2-b2 = " + to_string(x2.m()));
    if (x1.m() <= 0) throw degenerate_arrangement(x1.str() + ": ac - b <= 0");
    if (x1.m() == 3 || x1.m() == 6) throw excluded_root("m = " + to_string(x1.m()) + " is excluded");
    return detail::build_context(x1, x2);
}

/// arr1 = arr2 = x; allowed for every m > 0 including 3 and 6.
inline PairContext make_automorph_context(const Arrangement& x) {
    detail::require_markoff(x);
    if (x.m() <= 0) throw degenerate_arrangement(x.str() + ": ac - b <= 0");
    PairContext ctx = detail::build_context(x, x);
    ctx.automorph = true;
    return ctx;
}

/// The two parent arrangements of a non-root child triple: index 1 is
/// (x, xy - z, y), index 2 is its reverse. Both satisfy ac - b = z.
struct RealizablePair {
    MarkoffTriple child;
    Arrangement p1, p2;

    /// Arrangement for a signed index in {+-1, +-2}; negative means reversed.
    Arrangement arrangement(int i) const {
        if (i == 0 || i > 2 || i < -2) throw precondition_failed("index must be in {+-1, +-2}");
        const Arrangement& base = (i == 1 || i == -1) ? p1 : p2;
        return i > 0 ? base : base.reversed();
    }

    PairContext context(int i, int j) const { return make_pair_context(arrangement(i), arrangement(j)); }
};

inline RealizablePair realizable_pair(const MarkoffTriple& child) {
    if (child.z() <= 6) throw excluded_root("dominant " + to_string(child.z()) + " is excluded");
    Arrangement p1{child.x(), child.x() * child.y() - child.z(), child.y()};
    return {child, p1, p1.reversed()};
}

/// Every realizable pair whose common m lies in [15, bound], ascending m.
inline std::vector<RealizablePair> realizable_pairs(const BigInt& bound, unsigned workers = 1) {
    std::vector<RealizablePair> out;
    for (auto& t : enumerate_below(bound, workers))
        if (t.z() > 6) out.push_back(realizable_pair(t));
    return out;
}

/// The four ordered contexts (arr_i, arr_j), i, j in {1, 2}, of a realizable pair.
inline std::vector<PairContext> permuted_contexts(const RealizablePair& p) {
    return {p.context(1, 1), p.context(1, 2), p.context(2, 1), p.context(2, 2)};
}

} // namespace markoff
