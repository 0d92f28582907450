#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace rsthp
{
    using cdouble = std::complex<double>;
    using CMatrix = Eigen::MatrixXcd;
    using CVector = Eigen::VectorXcd;
    using RVector = Eigen::VectorXd;

    // A = L * Q with L lower triangular (m x m, real non-negative diagonal) and
    // Q (m x n) with orthonormal rows.
    struct LqFactors
    {
        CMatrix L;
        CMatrix Q;
    };

    // A = U * diag(S) * V^H, S descending and non-negative.
    struct SvdFactors
    {
        CMatrix U;
        RVector S;
        CMatrix V;
    };

    // Householder LQ factorization (QR of A^H). Requires rows <= cols and full
    // row rank; throws RankError when min |l_ii| <= 1e-12 * max |l_ii|.
    LqFactors lq_decompose(const CMatrix &A);

    SvdFactors svd(const CMatrix &A);

    // Seeded random stream. Substreams are derived from a root seed and a path of
    // integer labels, so a given (realization, draw) index pair always sees the
    // same numbers regardless of how work is split across threads.
    class RngStream
    {
    public:
        explicit RngStream(std::uint64_t seed);
        RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);
        RngStream(std::uint64_t seed, std::vector<std::uint64_t> path);

        RngStream substream(std::initializer_list<std::uint64_t> path) const;

        double normal();
        double uniform();
        std::uint64_t seed() const { return seed_; }
        std::mt19937_64 &engine() { return engine_; }

    private:
        std::uint64_t seed_;
        std::vector<std::uint64_t> path_;
        std::mt19937_64 engine_;
        std::normal_distribution<double> normal_{0.0, 1.0};
        std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    };

    // rows x cols matrix of i.i.d. CN(0, variance) entries (real and imaginary
    // parts each N(0, variance/2)).
    CMatrix sample_cgauss(Eigen::Index rows, Eigen::Index cols, double variance, RngStream &rng);

    // Dense product with explicit operation counting under the real-flop
    // convention: complex multiply = 6 flops, complex add = 2 flops.
    struct CountedProduct
    {
        CMatrix value;
        std::uint64_t flops = 0;
    };
    CountedProduct counted_multiply(const CMatrix &A, const CMatrix &B);

    double relative_frobenius_error(const CMatrix &reference, const CMatrix &approx);
}
