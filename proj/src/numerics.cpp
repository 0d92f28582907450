#include "rsthp/numerics.hpp"
#include "rsthp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rsthp
{
    namespace
    {
        bool all_finite(const CMatrix &A)
        {
            return A.allFinite();
        }
    }

    LqFactors lq_decompose(const CMatrix &A)
    {
        const Eigen::Index m = A.rows();
        const Eigen::Index n = A.cols();
        if (m == 0 || m > n)
            throw DomainError("lq_decompose: need 0 < rows <= cols, got " + std::to_string(m) + "x" + std::to_string(n));
        if (!all_finite(A))
            throw NumericError("lq_decompose: non-finite input");

        // QR of A^H (n x m) by Householder reflections; A = R^H * Qthin^H.
        CMatrix R = A.adjoint();
        std::vector<CVector> reflectors;
        reflectors.reserve(static_cast<std::size_t>(m));

        for (Eigen::Index k = 0; k < m; ++k)
        {
            const Eigen::Index len = n - k;
            CVector x = R.block(k, k, len, 1);
            const double xnorm = x.norm();
            CVector v = CVector::Zero(len);
            if (xnorm > 0.0)
            {
                const cdouble x0 = x(0);
                const cdouble phase = (std::abs(x0) > 0.0) ? x0 / std::abs(x0) : cdouble(1.0, 0.0);
                const cdouble alpha = -phase * xnorm;
                v = x;
                v(0) -= alpha;
                const double vnorm = v.norm();
                if (vnorm > 0.0)
                {
                    v /= vnorm;
                    // R[k:, k:] -= 2 v (v^H R[k:, k:])
                    auto block = R.block(k, k, len, m - k);
                    const Eigen::RowVectorXcd w = v.adjoint() * block;
                    block.noalias() -= 2.0 * v * w;
                }
            }
            reflectors.push_back(std::move(v));
        }

        // Thin Q: apply reflectors in reverse to the first m columns of I_n.
        CMatrix Qthin = CMatrix::Identity(n, m);
        for (Eigen::Index k = m - 1; k >= 0; --k)
        {
            const CVector &v = reflectors[static_cast<std::size_t>(k)];
            const Eigen::Index len = n - k;
            if (v.squaredNorm() == 0.0)
                continue;
            auto block = Qthin.block(k, 0, len, m);
            const Eigen::RowVectorXcd w = v.adjoint() * block;
            block.noalias() -= 2.0 * v * w;
        }

        CMatrix Rm = R.topRows(m).triangularView<Eigen::Upper>();

        // Absorb diagonal phases so that diag(L) is real and non-negative.
        for (Eigen::Index k = 0; k < m; ++k)
        {
            const cdouble r = Rm(k, k);
            const double mag = std::abs(r);
            if (mag == 0.0)
                continue;
            const cdouble ph = r / mag;
            Rm.row(k) *= std::conj(ph);
            Rm(k, k) = cdouble(mag, 0.0);
            Qthin.col(k) *= ph;
        }

        double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < m; ++k)
        {
            dmax = std::max(dmax, Rm(k, k).real());
            dmin = std::min(dmin, Rm(k, k).real());
        }
        if (!(dmax > 0.0) || dmin <= 1e-12 * dmax)
            throw RankError("lq_decompose: matrix is numerically rank deficient");

        return LqFactors{Rm.adjoint(), Qthin.adjoint()};
    }

    SvdFactors svd(const CMatrix &A)
    {
        if (!all_finite(A))
            throw NumericError("svd: non-finite input");
        Eigen::JacobiSVD<CMatrix> solver(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
        if (solver.info() != Eigen::Success)
            throw NumericError("svd: decomposition did not converge");
        return SvdFactors{solver.matrixU(), solver.singularValues(), solver.matrixV()};
    }

    RngStream::RngStream(std::uint64_t seed) : RngStream(seed, std::vector<std::uint64_t>{}) {}

    RngStream::RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
        : RngStream(seed, std::vector<std::uint64_t>(path)) {}

    RngStream::RngStream(std::uint64_t seed, std::vector<std::uint64_t> path)
        : seed_(seed), path_(std::move(path))
    {
        std::vector<std::uint32_t> words;
        words.reserve(2 * (path_.size() + 2));
        auto push = [&words](std::uint64_t x)
        {
            words.push_back(static_cast<std::uint32_t>(x & 0xffffffffu));
            words.push_back(static_cast<std::uint32_t>(x >> 32));
        };
        push(seed_);
        push(path_.size());
        for (auto p : path_)
            push(p);
        std::seed_seq seq(words.begin(), words.end());
        engine_.seed(seq);
    }

    RngStream RngStream::substream(std::initializer_list<std::uint64_t> path) const
    {
        std::vector<std::uint64_t> child = path_;
        child.insert(child.end(), path.begin(), path.end());
        return RngStream(seed_, std::move(child));
    }

    double RngStream::normal() { return normal_(engine_); }
    double RngStream::uniform() { return uniform_(engine_); }

    CMatrix sample_cgauss(Eigen::Index rows, Eigen::Index cols, double variance, RngStream &rng)
    {
        if (variance < 0.0)
            throw DomainError("sample_cgauss: negative variance");
        CMatrix out(rows, cols);
        const double s = std::sqrt(variance / 2.0);
        // Column-major fill; draws are consumed even for variance 0 so that the
        // stream position does not depend on the variance.
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i)
            {
                const double re = rng.normal();
                const double im = rng.normal();
                out(i, j) = cdouble(s * re, s * im);
            }
        return out;
    }

    CountedProduct counted_multiply(const CMatrix &A, const CMatrix &B)
    {
        if (A.cols() != B.rows())
            throw DomainError("counted_multiply: inner dimensions differ");
        if (A.cols() == 0)
            throw DomainError("counted_multiply: empty inner dimension");
        CountedProduct out;
        out.value = CMatrix::Zero(A.rows(), B.cols());
        std::uint64_t muls = 0, adds = 0;
        for (Eigen::Index i = 0; i < A.rows(); ++i)
            for (Eigen::Index j = 0; j < B.cols(); ++j)
            {
                cdouble acc = A(i, 0) * B(0, j);
                ++muls;
                for (Eigen::Index k = 1; k < A.cols(); ++k)
                {
                    acc += A(i, k) * B(k, j);
                    ++muls;
                    ++adds;
                }
                out.value(i, j) = acc;
            }
        out.flops = 6 * muls + 2 * adds;
        return out;
    }

    double relative_frobenius_error(const CMatrix &reference, const CMatrix &approx)
    {
        const double ref = reference.norm();
        const double diff = (reference - approx).norm();
        return ref > 0.0 ? diff / ref : diff;
    }
}
