#pragma once

#include "markoff/core/linalg.hpp"
#include "markoff/core/matrix.hpp"
#include "markoff/mt_matrices.hpp"

namespace markoff {

/// d = a^2 + b^2 + c^2 - abc.
inline BigInt defect(const BigInt& a, const BigInt& b, const BigInt& c) {
    return a * a + b * b + c * c - a * b * c;
}

/// Closed form of M^-1 M^t.
inline Mat3 H_of(const BigInt& a, const BigInt& b, const BigInt& c) {
    BigInt d0 = a * a + b * b - a * b * c;
    return Mat3{{Rational(1 - d0), Rational(a * c * c - b * c - a), Rational(a * c - b)},
                {Rational(a - b * c), Rational(1 - c * c), Rational(-c)},
                {Rational(b), Rational(c), 1}};
}

/// H by its definition, inverse3(M) * M^t.
inline Mat3 H_by_definition(const BigInt& a, const BigInt& b, const BigInt& c) {
    Mat3 m = M_of(a, b, c);
    return inverse3(m) * m.transpose();
}

/// The integral solution of R^t M + M R = 0 (fixed normalization).
inline Mat3 R_of(const BigInt& a, const BigInt& b, const BigInt& c) {
    return Mat3{{Rational(a * a + b * b - a * b * c), Rational(2 * a + b * c - a * c * c), Rational(2 * b - a * c)},
                {Rational(b * c - 2 * a), Rational(c * c - a * a), Rational(2 * c - a * b)},
                {Rational(a * c - 2 * b), Rational(-2 * c - a * b + a * a * c), Rational(a * b * c - b * b - c * c)}};
}

inline Mat3 S_of(const BigInt& a, const BigInt& b, const BigInt& c) {
    return H_of(a, b, c) - Mat3::identity();
}

inline Mat3 H_of(const Arrangement& x) { return H_of(x.a, x.b, x.c); }
inline Mat3 R_of(const Arrangement& x) { return R_of(x.a, x.b, x.c); }
inline Mat3 S_of(const Arrangement& x) { return S_of(x.a, x.b, x.c); }

/// det(H - l E) = -(l-1)^3 - d (l-1)^2 - d (l-1), expanded.
inline CharPoly3 H_char_poly(const BigInt& d) {
    Rational q(d);
    return {Rational(-1), Rational(3) - q, q - 3, Rational(1)};
}

/// det(R - l E) = -l^3 + d (d - 4) l.
inline CharPoly3 R_char_poly(const BigInt& d) {
    return {Rational(-1), Rational(0), Rational(d * (d - 4)), Rational(0)};
}

/// col(c,-b,a) * row(c, ac-b, a).
inline Mat3 S_squared_outer(const BigInt& a, const BigInt& b, const BigInt& c) {
    return outer(Vec3{Rational(c), Rational(-b), Rational(a)}, Vec3{Rational(c), Rational(a * c - b), Rational(a)});
}

struct NilpotentKit {
    Arrangement arr;
    Mat3 H, R, S;
    BigInt d;

    static NilpotentKit of(const Arrangement& x) {
        Mat3 h = H_of(x);
        return {x, h, R_of(x), h - Mat3::identity(), defect(x.a, x.b, x.c)};
    }
};

} // namespace markoff
