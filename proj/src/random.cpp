#include "coolmap/random.hpp"

namespace coolmap {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

CMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng)
{
    std::normal_distribution<double> n01;
    CMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index c = 0; c < g.cols(); ++c) {
        for (Eigen::Index r = 0; r < g.rows(); ++r) {
            const double re = n01(rng);
            const double im = n01(rng);
            g(r, c) = Complex(re, im);
        }
    }
    return g;
}

CVector random_unit_vector(std::size_t n, Rng& rng)
{
    CVector v = random_ginibre(n, 1, rng).col(0);
    const double norm = v.norm();
    // A zero Gaussian draw has probability zero; guard anyway.
    if (norm == 0.0) {
        v.setZero();
        v(0) = 1.0;
        return v;
    }
    return v / norm;
}

DensityMatrix random_state(std::size_t d, Rng& rng)
{
    const CMatrix g = random_ginibre(d, d, rng);
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return validate_density(0.5 * (rho + rho.adjoint()));
}

DensityMatrix random_pure_state(std::size_t d, Rng& rng)
{
    const CVector psi = random_unit_vector(d, rng);
    return validate_density(psi * psi.adjoint());
}

RVector random_simplex_point(std::size_t d, Rng& rng)
{
    std::exponential_distribution<double> e1;
    RVector w(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        w(i) = e1(rng);
    }
    return w / w.sum();
}

CMatrix random_unitary(std::size_t n, Rng& rng)
{
    const CMatrix g = random_ginibre(n, n, rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < q.cols(); ++i) {
        const Complex rii = r(i, i);
        if (std::abs(rii) > 0.0) {
            q.col(i) *= rii / std::abs(rii);
        }
    }
    return q;
}

} // namespace coolmap
