#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <utility>
#include <vector>

#include "markoff/core/error.hpp"
#include "markoff/core/linalg.hpp"
#include "markoff/core/matrix.hpp"
#include "markoff/core/rational.hpp"
#include "markoff/tree.hpp"

namespace markoff {

/// Ordered (a, b, c). No invariant by itself; see MTMatrix and PairContext.
struct Arrangement {
    BigInt a, b, c;

    Arrangement reversed() const { return {c, b, a}; }
    /// ac - b; the dominant member of the child when (a,b,c) is a parent arrangement.
    BigInt m() const { return a * c - b; }
    BigInt defect() const { return a * a + b * b + c * c - a * b * c; }
    bool is_markoff() const { return markoff::is_markoff(a, b, c); }
    BigInt max() const { return std::max({a, b, c}); }

    std::string str() const { return "(" + to_string(a) + "," + to_string(b) + "," + to_string(c) + ")"; }

    friend bool operator==(const Arrangement&, const Arrangement&) = default;
    friend bool operator<(const Arrangement& x, const Arrangement& y) {
        if (x.a != y.a) return x.a < y.a;
        if (x.b != y.b) return x.b < y.b;
        return x.c < y.c;
    }
};

/// M(a,b,c) = [[1,a,b],[0,1,c],[0,0,1]] for any integers.
inline Mat3 M_of(const BigInt& a, const BigInt& b, const BigInt& c) {
    return Mat3{{1, Rational(a), Rational(b)}, {0, 1, Rational(c)}, {0, 0, 1}};
}
inline Mat3 M_of(const Arrangement& x) { return M_of(x.a, x.b, x.c); }

/// (c, ac - b, a), the vector carried along by tree isomorphs.
inline Vec3 coefficient_vector(const Arrangement& x) {
    return Vec3{Rational(x.c), Rational(x.m()), Rational(x.a)};
}

class MTMatrix {
public:
    /// Validates the Markoff equation and max{a,b,c} in {a,c}; throws invalid_mt_matrix.
    static MTMatrix from(Arrangement x) {
        if (!x.is_markoff()) throw invalid_mt_matrix(x.str() + " is not a Markoff arrangement");
        BigInt top = x.max();
        if (top != x.a && top != x.c) throw invalid_mt_matrix(x.str() + ": largest entry sits in the middle");
        return MTMatrix(std::move(x));
    }
    static MTMatrix from(BigInt a, BigInt b, BigInt c) { return from(Arrangement{std::move(a), std::move(b), std::move(c)}); }
    static MTMatrix root() { return MTMatrix(Arrangement{3, 3, 3}); }

    const Arrangement& arr() const { return x_; }
    const BigInt& a() const { return x_.a; }
    const BigInt& b() const { return x_.b; }
    const BigInt& c() const { return x_.c; }
    Mat3 matrix() const { return M_of(x_); }
    MarkoffTriple triple() const { return MarkoffTriple::from(x_.a, x_.b, x_.c); }
    MTMatrix reversed() const { return MTMatrix(x_.reversed()); }
    bool is_root() const { return x_ == Arrangement{3, 3, 3}; }
    std::string str() const { return "M" + x_.str(); }

    friend bool operator==(const MTMatrix&, const MTMatrix&) = default;
    friend bool operator<(const MTMatrix& p, const MTMatrix& q) { return p.x_ < q.x_; }

private:
    explicit MTMatrix(Arrangement x) : x_(std::move(x)) {}
    Arrangement x_;
};

inline Mat3 generator_P(const BigInt& x) {
    return Mat3{{0, -1, 0}, {1, Rational(x), 0}, {0, 0, 1}};
}

inline Mat3 generator_Q(const BigInt& y) {
    return Mat3{{1, 0, 0}, {0, Rational(y), 1}, {0, -1, 0}};
}

enum class Rule { P, Q };

struct Step {
    MTMatrix result;
    Mat3 factor;
};

/// P: M(a,b,c) -> M(a, c, ac-b) via P(a).  Q: M(a,b,c) -> M(ac-b, a, c) via Q(c).
inline Step branch_step(const MTMatrix& mt, Rule rule) {
    const auto& x = mt.arr();
    if (rule == Rule::P) return {MTMatrix::from(x.a, x.c, x.m()), generator_P(x.a)};
    return {MTMatrix::from(x.m(), x.a, x.c), generator_Q(x.c)};
}

/// Distinct MT arrangements of a triple, lexicographic.
inline std::vector<MTMatrix> mt_arrangements(const MarkoffTriple& t) {
    std::array<BigInt, 3> v{t.x(), t.y(), t.z()};
    std::vector<MTMatrix> out;
    do {
        if (v[2] == t.z() || v[0] == t.z()) out.push_back(MTMatrix::from(v[0], v[1], v[2]));
    } while (std::next_permutation(v.begin(), v.end()));
    return out;
}

/// Inverse of branch_step: the MT-matrix one step closer to M(3,3,3) and the
/// generator G with G^t M(parent) G = M(child).
inline Step mt_parent(const MTMatrix& child) {
    if (child.is_root()) throw root_has_no_parent("M(3,3,3) is the root arrangement");
    const auto& x = child.arr();
    if (x.c > x.a) return {MTMatrix::from(x.a, x.a * x.b - x.c, x.b), generator_P(x.a)};
    return {MTMatrix::from(x.b, x.b * x.c - x.a, x.c), generator_Q(x.c)};
}

/// N with N^t M(3,3,3) N = M(mt) and N^t (3,6,3) = v(mt); the product of
/// generators along the path from the root.
inline Mat3 root_isomorph(const MTMatrix& mt) {
    std::vector<Mat3> factors;
    MTMatrix cur = mt;
    while (!cur.is_root()) {
        Step s = mt_parent(cur);
        factors.push_back(std::move(s.factor));
        cur = std::move(s.result);
    }
    Mat3 n = Mat3::identity();
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) n = n * *it;
    return n;
}

/// N in SL(3,Z) with N^t M(src) N = M(dst) and N^t v(src) = v(dst), routed through the root.
inline Mat3 tree_isomorph(const MTMatrix& src, const MTMatrix& dst) {
    if (src == dst) return Mat3::identity();
    return inverse3(root_isomorph(src)) * root_isomorph(dst);
}

/// diag(1,-1,1) (N^-1)^t diag(1,-1,1).
inline Mat3 signed_reflect(const Mat3& n) {
    if (!is_integral(n)) throw non_unimodular("signed_reflect: matrix is not integral");
    Rational d = det(n);
    if (d != 1 && d != -1) throw non_unimodular("signed_reflect: det = " + d.str());
    Mat3 t = inverse3(n).transpose();
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if ((i == 1) != (j == 1)) t(i, j) = -t(i, j);
    return t;
}

// --- admissible triples ---------------------------------------------------

inline Mat2 cohn_A0() { return Mat2{{2, 1}, {1, 1}}; }
inline Mat2 cohn_B0() { return Mat2{{1, 1}, {1, 2}}; }

struct AdmissibleTriple {
    Mat2 A, AB, B;

    std::array<BigInt, 3> traces() const { return {A.trace(), AB.trace(), B.trace()}; }

    /// Middle equals A*B, each component has det 1 and positive entries,
    /// traces solve the normalized equation and lower-left = trace/3.
    bool valid() const {
        if (!(AB == A * B)) return false;
        for (const Mat2* x : {&A, &AB, &B}) {
            if (det(*x) != 1) return false;
            for (const auto& e : *x)
                if (e <= 0) return false;
            if (3 * (*x)(1, 0) != x->trace()) return false;
        }
        auto t = traces();
        return is_markoff(t[0], t[1], t[2]);
    }
};

/// LEFT: (A, AB, B) -> (A, A*AB, AB).  RIGHT: (A, AB, B) -> (AB, AB*B, B).
inline AdmissibleTriple admissible_triple(const BranchWord& path) {
    AdmissibleTriple t{cohn_A0(), cohn_A0() * cohn_B0(), cohn_B0()};
    for (Branch b : path.steps) {
        if (b == Branch::left) t = {t.A, t.A * t.AB, t.AB};
        else t = {t.AB, t.AB * t.B, t.B};
    }
    return t;
}

/// Arrangement reached from (3,3,3) by the generator rules matching `path`:
/// LEFT is the Q rule, RIGHT the P rule.
inline MTMatrix arrangement_of_word(const BranchWord& path) {
    MTMatrix cur = MTMatrix::root();
    for (Branch b : path.steps) cur = branch_step(cur, b == Branch::left ? Rule::Q : Rule::P).result;
    return cur;
}

/// Integer (u, v, w) with X = u A0 + v A0B0 + w B0.
inline std::array<BigInt, 3> cohn_coordinates(const Mat2& x) {
    // entries of A0, A0B0, B0: (2,1,1,1), (3,4,2,3), (1,1,1,2)
    BigInt twice_v = x(0, 1) - x(1, 0);
    if (!divides(BigInt(2), twice_v)) throw inconsistent_decomposition("odd off-diagonal difference");
    BigInt v = exact_div(twice_v, 2);
    BigInt u = x(0, 0) - x(1, 0) - v;
    BigInt w = x(1, 0) - u - 2 * v;
    if (u + 3 * v + 2 * w != x(1, 1)) throw inconsistent_decomposition("matrix outside the span of A0, A0B0, B0");
    return {u, v, w};
}

/// Columns: coordinates of A, AB, B in the basis (A0, A0B0, B0).
inline Mat3 cohn_coefficient_vectors(const AdmissibleTriple& adm) {
    Mat3 n;
    const Mat2* parts[3] = {&adm.A, &adm.AB, &adm.B};
    for (std::size_t j = 0; j < 3; ++j) {
        auto uvw = cohn_coordinates(*parts[j]);
        for (std::size_t i = 0; i < 3; ++i) n(i, j) = Rational(uvw[i]);
    }
    return n;
}

} // namespace markoff
