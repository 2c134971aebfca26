#pragma once

#include <array>

#include "markoff/core/error.hpp"
#include "markoff/core/matrix.hpp"

namespace markoff {

template <class T>
T det(const Matrix<T, 2>& m) {
    return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

template <class T>
T det(const Matrix<T, 3>& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
         - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
         + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

/// Adjugate of a 3x3 matrix (transpose of the cofactor matrix).
template <class T>
Matrix<T, 3> adjugate(const Matrix<T, 3>& m) {
    Matrix<T, 3> adj;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            std::size_t r0 = (j + 1) % 3, r1 = (j + 2) % 3;
            std::size_t c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            // cyclic index choice folds the cofactor sign in
            adj(i, j) = m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
        }
    return adj;
}

/// Exact inverse via adjugate / determinant.
inline Mat3 inverse3(const Mat3& m) {
    Rational d = det(m);
    if (d.is_zero()) throw singular_matrix("inverse3: determinant is zero");
    return adjugate(m) * (Rational(1) / d);
}

/// Coefficients (c3, c2, c1, c0) of det(M - lambda E) = c3 l^3 + c2 l^2 + c1 l + c0.
struct CharPoly3 {
    Rational c3, c2, c1, c0;
    friend bool operator==(const CharPoly3&, const CharPoly3&) = default;
};

inline CharPoly3 char_poly3(const Mat3& m) {
    Rational minors = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0))
                    + (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0))
                    + (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1));
    return {Rational(-1), m.trace(), -minors, det(m)};
}

inline int rank3(const Mat3& m) {
    if (m.is_zero()) return 0;
    if (!det(m).is_zero()) return 3;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k)
                for (std::size_t l = k + 1; l < 3; ++l)
                    if (!(m(i, k) * m(j, l) - m(i, l) * m(j, k)).is_zero()) return 2;
    return 1;
}

/// e^{-(R/2) s} for a matrix with R^3 = 0, i.e. E - (s/2) R + (s^2/8) R^2.
inline Mat3 exp_half_R(const Mat3& R, const Rational& s) {
    Mat3 R2 = R * R;
    if (!(R2 * R).is_zero()) throw not_nilpotent("exp_half_R: R^3 != 0");
    return Mat3::identity() - R * (s / 2) + R2 * (s * s / 8);
}

/// Row-major integer matrix over BigInt from an integral Mat3.
inline Matrix<BigInt, 3> to_integer_matrix(const Mat3& m) {
    return m.map([](const Rational& x) { return x.to_integer(); });
}

inline Mat3 to_rational_matrix(const Matrix<BigInt, 3>& m) {
    return m.map([](const BigInt& x) { return Rational(x); });
}

/// x = 0 (mod k) in the local ring at k: the denominator of x is prime to k
/// and k divides the numerator. Returns false when the denominator shares a
/// factor with k (the residue is then undefined).
inline bool is_zero_mod(const Rational& x, const BigInt& k) {
    if (gcd(x.den(), k) != 1) return false;
    return divides(k, x.num());
}

inline bool residue_defined(const Rational& x, const BigInt& k) { return gcd(x.den(), k) == 1; }

inline bool is_zero_mod(const Mat3& m, const BigInt& k) {
    for (const auto& x : m)
        if (!is_zero_mod(x, k)) return false;
    return true;
}

inline bool residues_defined(const Mat3& m, const BigInt& k) {
    for (const auto& x : m)
        if (!residue_defined(x, k)) return false;
    return true;
}

inline bool congruent_mod(const Mat3& a, const Mat3& b, const BigInt& k) {
    return is_zero_mod(a - b, k);
}

} // namespace markoff
