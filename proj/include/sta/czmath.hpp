#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace sta {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

// Two-component complex amplitude vector in the basis |1>, |2>.
struct ComplexVec2 {
    cplx c1{};
    cplx c2{};

    cplx operator[](int k) const { return k == 0 ? c1 : c2; }

    // |c_k|^2 for k = 1 or 2.
    double population(int k) const { return std::norm(k == 1 ? c1 : c2); }
    double norm2() const { return std::norm(c1) + std::norm(c2); }

    ComplexVec2 conj() const { return {std::conj(c1), std::conj(c2)}; }

    friend ComplexVec2 operator+(const ComplexVec2& a, const ComplexVec2& b) { return {a.c1 + b.c1, a.c2 + b.c2}; }
    friend ComplexVec2 operator-(const ComplexVec2& a, const ComplexVec2& b) { return {a.c1 - b.c1, a.c2 - b.c2}; }
    friend ComplexVec2 operator*(cplx s, const ComplexVec2& v) { return {s * v.c1, s * v.c2}; }
    friend ComplexVec2 operator*(const ComplexVec2& v, cplx s) { return s * v; }
    friend bool operator==(const ComplexVec2&, const ComplexVec2&) = default;
};

// <bra|ket>, conjugating the bra components.
inline cplx inner(const ComplexVec2& bra, const ComplexVec2& ket)
{
    return std::conj(bra.c1) * ket.c1 + std::conj(bra.c2) * ket.c2;
}

inline double norm(const ComplexVec2& v) { return std::sqrt(v.norm2()); }

// 2x2 complex matrix, row-major entries.
struct ComplexMat2 {
    cplx m11{}, m12{}, m21{}, m22{};

    static ComplexMat2 zero() { return {}; }
    static ComplexMat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static ComplexMat2 diag(cplx a, cplx b) { return {a, 0.0, 0.0, b}; }

    ComplexMat2 adjoint() const { return {std::conj(m11), std::conj(m21), std::conj(m12), std::conj(m22)}; }
    ComplexMat2 transpose() const { return {m11, m21, m12, m22}; }
    cplx trace() const { return m11 + m22; }
    cplx det() const { return m11 * m22 - m12 * m21; }

    double frobenius_norm() const
    {
        return std::sqrt(std::norm(m11) + std::norm(m12) + std::norm(m21) + std::norm(m22));
    }
    double max_abs() const
    {
        return std::max({std::abs(m11), std::abs(m12), std::abs(m21), std::abs(m22)});
    }

    friend ComplexMat2 operator+(const ComplexMat2& a, const ComplexMat2& b)
    {
        return {a.m11 + b.m11, a.m12 + b.m12, a.m21 + b.m21, a.m22 + b.m22};
    }
    friend ComplexMat2 operator-(const ComplexMat2& a, const ComplexMat2& b)
    {
        return {a.m11 - b.m11, a.m12 - b.m12, a.m21 - b.m21, a.m22 - b.m22};
    }
    friend ComplexMat2 operator*(const ComplexMat2& a, const ComplexMat2& b)
    {
        return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
                a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
    }
    friend ComplexMat2 operator*(cplx s, const ComplexMat2& a) { return {s * a.m11, s * a.m12, s * a.m21, s * a.m22}; }
    friend ComplexMat2 operator*(const ComplexMat2& a, cplx s) { return s * a; }
    friend ComplexVec2 operator*(const ComplexMat2& a, const ComplexVec2& v)
    {
        return {a.m11 * v.c1 + a.m12 * v.c2, a.m21 * v.c1 + a.m22 * v.c2};
    }
    friend bool operator==(const ComplexMat2&, const ComplexMat2&) = default;
};

// |ket><bra|
inline ComplexMat2 outer(const ComplexVec2& ket, const ComplexVec2& bra)
{
    return {ket.c1 * std::conj(bra.c1), ket.c1 * std::conj(bra.c2),
            ket.c2 * std::conj(bra.c1), ket.c2 * std::conj(bra.c2)};
}

inline ComplexMat2 commutator(const ComplexMat2& a, const ComplexMat2& b) { return a * b - b * a; }

// Eigenvalues with right eigenvectors and their biorthogonal partners.
// left[n] is stored as a ket of H^dagger, so <left[n]|right[m]> = delta_nm.
struct BiorthoBasis {
    std::array<cplx, 2> eigenvalues{};
    std::array<ComplexVec2, 2> right{};
    std::array<ComplexVec2, 2> left{};
};

inline constexpr double kDefaultEigTol = 1e-9;

// Closed-form biorthogonal eigendecomposition of a 2x2 matrix.
//
// Eigenvalues are (tr -/+ s)/2 with s the principal square root of the
// discriminant, so eigenvalues[0] carries the minus sign. Gauge: for a
// complex-symmetric matrix the right vectors satisfy r^T r = 1 with the
// largest-magnitude component having non-negative real part, so that
// left = conj(right). Otherwise the right vector has unit Euclidean norm and
// a real-positive largest component, and the left vector is scaled to give
// <l|r> = 1.
//
// Throws DegenerateSpectrum if |E_1 - E_2| <= tol * max(1, ||H||_F).
BiorthoBasis eigensystem_2x2(const ComplexMat2& h, double tol = kDefaultEigTol);

// Sum_n |r_n> E_n <l_n|
ComplexMat2 reconstruct(const BiorthoBasis& basis);

// Frobenius norm of Sum_n |r_n><l_n| - 1.
double closure_defect(const BiorthoBasis& basis);

// Max over n, m of |<l_n|r_m> - delta_nm|.
double biorthonormality_defect(const BiorthoBasis& basis);

} // namespace sta
