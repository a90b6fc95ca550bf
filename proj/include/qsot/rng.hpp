#ifndef QSOT_RNG_HPP
#define QSOT_RNG_HPP

#include <cstdint>
#include <random>

#include "qsot/linalg.hpp"

namespace qsot {

/// SplitMix64 step; used to derive independent per-trial seeds from a master
/// seed. Fixed here so seeded runs are reproducible across platforms.
uint64_t splitmix64(uint64_t x);

/// Seeded random source. The generator is std::mt19937_64 (fully specified by
/// the standard); Gaussians come from an explicit Box-Muller transform over
/// 53-bit uniforms, so the stream does not depend on the standard library's
/// std::normal_distribution implementation.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform();

    /// Standard normal N(0, 1).
    double gaussian();

    /// Complex standard normal: independent N(0,1) real and imaginary parts.
    Complex cgaussian();

    /// Entrywise complex-Gaussian matrix.
    Matrix gaussian_matrix(int rows, int cols);

    /// Haar-distributed isometry (rows >= cols): QR of a Gaussian matrix with
    /// the phases of R's diagonal absorbed into Q.
    Matrix haar_isometry(int rows, int cols);

    Matrix haar_unitary(int d) { return haar_isometry(d, d); }

    /// Random density operator: normalized Wishart G G^dag / Tr, rank
    /// min(d, rank_hint).
    Matrix random_density(int d, int rank_hint = 0);

    Matrix random_hermitian(int d);

    uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace qsot

#endif
