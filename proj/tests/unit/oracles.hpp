#pragma once

// Independent reference computations used to cross-check the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <tuple>
#include <vector>

#include "markoff/core/matrix.hpp"
#include "markoff/core/rational.hpp"

namespace oracle {

using markoff::BigInt;
using markoff::Mat3;
using markoff::Rational;

/// Leibniz expansion over all 6 permutations.
inline Rational leibniz_det(const Mat3& m) {
    std::array<int, 3> p{0, 1, 2};
    Rational total(0);
    do {
        int inversions = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (p[i] > p[j]) ++inversions;
        Rational term = m(0, p[0]) * m(1, p[1]) * m(2, p[2]);
        total += (inversions % 2) ? -term : term;
    } while (std::next_permutation(p.begin(), p.end()));
    return total;
}

/// det(m - lambda E)
inline Rational det_shifted(const Mat3& m, const Rational& lambda) {
    return leibniz_det(m - Mat3::identity() * lambda);
}

/// Truncated power series sum_{k<terms} X^k / k!.
inline Mat3 exp_series(const Mat3& x, int terms) {
    Mat3 sum = Mat3::identity(), power = Mat3::identity();
    Rational fact(1);
    for (int k = 1; k < terms; ++k) {
        power = power * x;
        fact *= Rational(k);
        sum += power * (Rational(1) / fact);
    }
    return sum;
}

/// All sorted positive solutions of a^2+b^2+c^2 = abc with c <= bound, by
/// direct search over (a, b) and solving the quadratic in c. bound <= 10^4.
inline std::vector<std::array<long, 3>> brute_markoff(long bound) {
    std::vector<std::array<long, 3>> out;
    for (long a = 1; a <= bound; ++a)
        for (long b = a; b <= bound; ++b) {
            // c^2 - ab c + (a^2 + b^2) = 0
            long disc = a * a * b * b - 4 * (a * a + b * b);
            if (disc < 0) continue;
            long root = static_cast<long>(std::sqrt(static_cast<double>(disc)));
            while (root * root > disc) --root;
            while ((root + 1) * (root + 1) <= disc) ++root;
            if (root * root != disc) continue;
            for (long c2 : {a * b + root, a * b - root}) {
                if (c2 % 2 != 0) continue;
                long c = c2 / 2;
                if (c >= b && c <= bound) out.push_back({a, b, c});
            }
        }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        return std::tie(x[2], x[1], x[0]) < std::tie(y[2], y[1], y[0]);
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Prime factors by plain trial division.
inline std::vector<std::pair<long, unsigned>> trial_factor(long n) {
    std::vector<std::pair<long, unsigned>> out;
    for (long p = 2; p * p <= n; ++p) {
        unsigned e = 0;
        while (n % p == 0) n /= p, ++e;
        if (e) out.push_back({p, e});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

inline Mat3 int_matrix(std::initializer_list<std::initializer_list<long>> rows) {
    Mat3 m;
    std::size_t i = 0;
    for (const auto& r : rows) {
        std::size_t j = 0;
        for (long v : r) m(i, j++) = Rational(v);
        ++i;
    }
    return m;
}

} // namespace oracle
