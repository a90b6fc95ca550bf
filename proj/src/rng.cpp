#include "qsot/rng.hpp"

#include <cmath>

namespace qsot {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double Rng::uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Complex Rng::cgaussian() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return Complex(r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2));
}

Matrix Rng::gaussian_matrix(int rows, int cols) {
    Matrix g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) g(i, j) = cgaussian();
    return g;
}

Matrix Rng::haar_isometry(int rows, int cols) {
    if (rows < cols) throw ValidationError("haar_isometry: rows must be >= cols");
    Matrix g = gaussian_matrix(rows, cols);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
    Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    for (int j = 0; j < cols; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        if (a > 0.0) q.col(j) *= d / a;  // Mezzadri phase fix
    }
    return q;
}

Matrix Rng::random_density(int d, int rank_hint) {
    const int k = (rank_hint <= 0 || rank_hint > d) ? d : rank_hint;
    Matrix g = gaussian_matrix(d, k);
    Matrix rho = g * g.adjoint();
    return rho / rho.trace();
}

Matrix Rng::random_hermitian(int d) {
    Matrix g = gaussian_matrix(d, d);
    return 0.5 * (g + g.adjoint());
}

}  // namespace qsot
