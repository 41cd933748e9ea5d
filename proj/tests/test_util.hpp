#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <doctest.h>

#include "coolmap/error.hpp"
#include "coolmap/quantum_core.hpp"

namespace tu {

using namespace coolmap;

inline CMatrix mat(std::initializer_list<std::initializer_list<Complex>> rows)
{
    CMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index r = 0;
    for (const auto& row : rows) {
        Eigen::Index c = 0;
        for (const auto& x : row) m(r, c++) = x;
        ++r;
    }
    return m;
}

inline DensityMatrix density(const CMatrix& m) { return validate_density(m); }

inline DensityMatrix plus_state() { return density(mat({{0.5, 0.5}, {0.5, 0.5}})); }

inline DensityMatrix ground(std::size_t d)
{
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    m(0, 0) = 1.0;
    return density(m);
}

inline DensityMatrix pure(const CVector& psi) { return density(psi * psi.adjoint()); }

inline DensityMatrix pure2(double a, double b)
{
    CVector psi(2);
    psi << a, b;
    return pure(psi);
}

inline ErrorKind error_kind(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::InvalidArgument;
}

inline Error caught(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e;
    }
    FAIL("expected an Error");
    return Error(ErrorKind::InvalidArgument, "");
}

} // namespace tu
