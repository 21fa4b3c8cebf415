#include "sta/czmath.hpp"

#include "sta/errors.hpp"

#include <sstream>

namespace sta {

namespace {

// Picks the better-conditioned of the two null-vector candidates of (H - lambda).
ComplexVec2 right_vector(const ComplexMat2& h, cplx lambda)
{
    const ComplexVec2 a{h.m12, lambda - h.m11};
    const ComplexVec2 b{lambda - h.m22, h.m21};
    return a.norm2() >= b.norm2() ? a : b;
}

// Row vector y with y H = lambda y, returned as its components (not conjugated).
ComplexVec2 left_row(const ComplexMat2& h, cplx lambda)
{
    const ComplexVec2 a{h.m21, lambda - h.m11};
    const ComplexVec2 b{lambda - h.m22, h.m12};
    return a.norm2() >= b.norm2() ? a : b;
}

cplx largest_component(const ComplexVec2& v)
{
    return std::abs(v.c1) >= std::abs(v.c2) ? v.c1 : v.c2;
}

} // namespace

BiorthoBasis eigensystem_2x2(const ComplexMat2& h, double tol)
{
    const cplx tr = h.trace();
    const cplx diff = h.m11 - h.m22;
    const cplx s = std::sqrt(diff * diff + 4.0 * h.m12 * h.m21);

    const double scale = std::max(1.0, h.frobenius_norm());
    if (!(std::abs(s) > tol * scale)) {
        std::ostringstream msg;
        msg << "eigensystem_2x2: degenerate spectrum, |E1 - E2| = " << std::abs(s)
            << " <= " << tol * scale;
        throw DegenerateSpectrum(msg.str());
    }

    BiorthoBasis out;
    out.eigenvalues = {0.5 * (tr - s), 0.5 * (tr + s)};
    const bool symmetric = h.m12 == h.m21;

    for (int n = 0; n < 2; ++n) {
        const cplx lambda = out.eigenvalues[n];
        ComplexVec2 r = right_vector(h, lambda);
        if (symmetric) {
            r = (1.0 / std::sqrt(r.c1 * r.c1 + r.c2 * r.c2)) * r;
            if (largest_component(r).real() < 0.0)
                r = -1.0 * r;
            out.right[n] = r;
            out.left[n] = r.conj();
        } else {
            r = (1.0 / norm(r)) * r;
            const cplx big = largest_component(r);
            r = (std::abs(big) / big) * r;
            const ComplexVec2 y = left_row(h, lambda);
            const cplx yr = y.c1 * r.c1 + y.c2 * r.c2;
            out.right[n] = r;
            out.left[n] = (1.0 / std::conj(yr)) * y.conj();
        }
    }
    return out;
}

ComplexMat2 reconstruct(const BiorthoBasis& basis)
{
    ComplexMat2 m;
    for (int n = 0; n < 2; ++n)
        m = m + basis.eigenvalues[n] * outer(basis.right[n], basis.left[n]);
    return m;
}

double closure_defect(const BiorthoBasis& basis)
{
    ComplexMat2 m;
    for (int n = 0; n < 2; ++n)
        m = m + outer(basis.right[n], basis.left[n]);
    return (m - ComplexMat2::identity()).frobenius_norm();
}

double biorthonormality_defect(const BiorthoBasis& basis)
{
    double worst = 0.0;
    for (int n = 0; n < 2; ++n)
        for (int m = 0; m < 2; ++m) {
            const cplx expected = n == m ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(inner(basis.left[n], basis.right[m]) - expected));
        }
    return worst;
}

} // namespace sta
