#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <utility>

#include "markoff/core/error.hpp"
#include "markoff/core/rational.hpp"

namespace markoff {

/// Fixed-size column vector.
template <class T, std::size_t N>
class Vector {
public:
    Vector() : v_{} { v_.fill(T(0)); }
    Vector(std::initializer_list<T> xs) : Vector() {
        if (xs.size() != N) throw precondition_failed("vector literal has wrong length");
        std::size_t i = 0;
        for (const auto& x : xs) v_[i++] = x;
    }

    static constexpr std::size_t size() { return N; }

    T& operator[](std::size_t i) { return v_[i]; }
    const T& operator[](std::size_t i) const { return v_[i]; }

    auto begin() const { return v_.begin(); }
    auto end() const { return v_.end(); }

    friend bool operator==(const Vector&, const Vector&) = default;

    friend Vector operator+(Vector a, const Vector& b) {
        for (std::size_t i = 0; i < N; ++i) a.v_[i] += b.v_[i];
        return a;
    }
    friend Vector operator-(Vector a, const Vector& b) {
        for (std::size_t i = 0; i < N; ++i) a.v_[i] -= b.v_[i];
        return a;
    }
    friend Vector operator*(const T& k, Vector a) {
        for (auto& x : a.v_) x *= k;
        return a;
    }

    friend T dot(const Vector& a, const Vector& b) {
        T s(0);
        for (std::size_t i = 0; i < N; ++i) s += a.v_[i] * b.v_[i];
        return s;
    }

private:
    std::array<T, N> v_;
};

/// Dense N x N matrix stored row-major. Only the operations the Markoff
/// constructions need; N is 2 or 3 in practice.
template <class T, std::size_t N>
class Matrix {
public:
    using value_type = T;

    Matrix() { a_.fill(T(0)); }

    Matrix(std::initializer_list<std::initializer_list<T>> rows) : Matrix() {
        if (rows.size() != N) throw precondition_failed("matrix literal has wrong row count");
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != N) throw precondition_failed("matrix literal has wrong column count");
            std::size_t j = 0;
            for (const auto& x : row) (*this)(i, j++) = x;
            ++i;
        }
    }

    static Matrix zero() { return Matrix(); }

    static Matrix identity() {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = T(1);
        return m;
    }

    static Matrix diagonal(const std::array<T, N>& d) {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
        return m;
    }

    /// Matrix whose columns are the given vectors.
    static Matrix from_columns(const std::array<Vector<T, N>, N>& cols) {
        Matrix m;
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t i = 0; i < N; ++i) m(i, j) = cols[j][i];
        return m;
    }

    static constexpr std::size_t rows() { return N; }
    static constexpr std::size_t cols() { return N; }

    T& operator()(std::size_t i, std::size_t j) { return a_[i * N + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * N + j]; }

    Vector<T, N> column(std::size_t j) const {
        Vector<T, N> v;
        for (std::size_t i = 0; i < N; ++i) v[i] = (*this)(i, j);
        return v;
    }

    Vector<T, N> row(std::size_t i) const {
        Vector<T, N> v;
        for (std::size_t j = 0; j < N; ++j) v[j] = (*this)(i, j);
        return v;
    }

    auto begin() const { return a_.begin(); }
    auto end() const { return a_.end(); }

    Matrix transpose() const {
        Matrix t;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    T trace() const {
        T s(0);
        for (std::size_t i = 0; i < N; ++i) s += (*this)(i, i);
        return s;
    }

    bool is_zero() const {
        for (const auto& x : a_)
            if (x != T(0)) return false;
        return true;
    }

    template <class F>
    auto map(F&& f) const {
        using U = decltype(f(std::declval<const T&>()));
        Matrix<U, N> out;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) out(i, j) = f((*this)(i, j));
        return out;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

    Matrix& operator+=(const Matrix& o) {
        for (std::size_t k = 0; k < N * N; ++k) a_[k] += o.a_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        for (std::size_t k = 0; k < N * N; ++k) a_[k] -= o.a_[k];
        return *this;
    }
    Matrix& operator*=(const T& k) {
        for (auto& x : a_) x *= k;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator-(Matrix a) {
        for (auto& x : a.a_) x = -x;
        return a;
    }
    friend Matrix operator*(const T& k, Matrix a) { return a *= k; }
    friend Matrix operator*(Matrix a, const T& k) { return a *= k; }

    friend Matrix operator*(const Matrix& x, const Matrix& y) {
        Matrix p;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < N; ++k) {
                if (x(i, k) == T(0)) continue;
                for (std::size_t j = 0; j < N; ++j) p(i, j) += x(i, k) * y(k, j);
            }
        return p;
    }

    friend Vector<T, N> operator*(const Matrix& x, const Vector<T, N>& v) {
        Vector<T, N> r;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) r[i] += x(i, j) * v[j];
        return r;
    }

    friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
        os << '[';
        for (std::size_t i = 0; i < N; ++i) {
            os << (i ? ",[" : "[");
            for (std::size_t j = 0; j < N; ++j) os << (j ? "," : "") << m(i, j);
            os << ']';
        }
        return os << ']';
    }

private:
    std::array<T, N * N> a_;
};

using Mat3 = Matrix<Rational, 3>;
using Vec3 = Vector<Rational, 3>;
using Mat2 = Matrix<BigInt, 2>;

/// col * row^t.
template <class T, std::size_t N>
Matrix<T, N> outer(const Vector<T, N>& col, const Vector<T, N>& row) {
    Matrix<T, N> m;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) m(i, j) = col[i] * row[j];
    return m;
}

template <class T, std::size_t N>
Matrix<T, N> power(const Matrix<T, N>& m, unsigned k) {
    Matrix<T, N> r = Matrix<T, N>::identity();
    for (unsigned i = 0; i < k; ++i) r = r * m;
    return r;
}

inline bool is_integral(const Mat3& m) {
    for (const auto& x : m)
        if (!x.is_integer()) return false;
    return true;
}

inline bool is_integral(const Vec3& v) {
    for (const auto& x : v)
        if (!x.is_integer()) return false;
    return true;
}

/// Elementary matrix unit e_ij.
inline Mat3 unit_matrix(std::size_t i, std::size_t j) {
    Mat3 m;
    m(i, j) = 1;
    return m;
}

} // namespace markoff
