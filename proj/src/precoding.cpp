#include "rsthp/precoding.hpp"
#include "rsthp/errors.hpp"

#include <cmath>

namespace rsthp
{
    namespace
    {
        CMatrix unit_feedback(const CMatrix &L, const CMatrix &C, ThpStructure structure)
        {
            CMatrix B = structure == ThpStructure::Centralized ? CMatrix(L * C) : CMatrix(C * L);
            // Exact ones on the diagonal; the products above only round to them.
            for (Eigen::Index i = 0; i < B.rows(); ++i)
                B(i, i) = cdouble(1.0, 0.0);
            return B;
        }

        CMatrix inverse_diagonal(const CMatrix &L)
        {
            CMatrix C = CMatrix::Zero(L.rows(), L.rows());
            for (Eigen::Index i = 0; i < L.rows(); ++i)
                C(i, i) = 1.0 / L(i, i).real();
            return C;
        }

        void check_delta(double delta)
        {
            if (!(delta >= 0.0 && delta <= 1.0))
                throw DomainError("power split delta must lie in [0, 1]");
        }
    }

    CMatrix ThpFilters::shaping() const
    {
        return centralized() ? CMatrix(F * C) : F;
    }

    ThpFilters zf_thp_filters(const CMatrix &H_hat, ThpStructure structure)
    {
        const LqFactors lq = lq_decompose(H_hat);
        ThpFilters f;
        f.design = ThpDesign::ZF;
        f.structure = structure;
        f.F = lq.Q.adjoint();
        f.C = inverse_diagonal(lq.L);
        f.B = unit_feedback(lq.L, f.C, structure);
        f.L = lq.L;
        return f;
    }

    double mmse_regularizer(Eigen::Index Nr, double Etr, double sigma_n2)
    {
        if (!(Etr > 0.0))
            throw DomainError("mmse_thp_filters: Etr must be positive");
        return std::sqrt(static_cast<double>(Nr) * sigma_n2 / Etr);
    }

    ThpFilters mmse_thp_filters_with_regularizer(const CMatrix &H_hat, double regularizer, ThpStructure structure)
    {
        const Eigen::Index Nr = H_hat.rows();
        const Eigen::Index Nt = H_hat.cols();
        CMatrix extended(Nr, Nt + Nr);
        extended.leftCols(Nt) = H_hat;
        extended.rightCols(Nr) = regularizer * CMatrix::Identity(Nr, Nr);

        const LqFactors lq = lq_decompose(extended);
        ThpFilters f;
        f.design = ThpDesign::MMSE;
        f.structure = structure;
        // Only the first Nt rows of Q^H reach the antennas.
        f.F = lq.Q.leftCols(Nt).adjoint();
        f.C = inverse_diagonal(lq.L);
        f.B = unit_feedback(lq.L, f.C, structure);
        f.L = lq.L;
        return f;
    }

    ThpFilters mmse_thp_filters(const CMatrix &H_hat, double Etr, double sigma_n2, ThpStructure structure)
    {
        return mmse_thp_filters_with_regularizer(H_hat, mmse_regularizer(H_hat.rows(), Etr, sigma_n2), structure);
    }

    CVector common_precoder(const CMatrix &H_hat, double delta, double Etr)
    {
        check_delta(delta);
        const Eigen::Index Nt = H_hat.cols();
        if (delta == 0.0)
            return CVector::Zero(Nt);
        const SvdFactors f = svd(H_hat);
        CVector v = f.V.col(0);
        return std::sqrt(delta * Etr) * v / v.norm();
    }

    double beta_scaling(const ThpFilters &filters, double Etr, double delta, CthpBetaRule rule)
    {
        check_delta(delta);
        const double private_power = Etr - delta * Etr;
        if (delta == 1.0 || private_power <= 0.0)
            return 0.0;
        double denom = 0.0;
        if (filters.design == ThpDesign::ZF && filters.centralized() && rule == CthpBetaRule::Literal)
        {
            for (Eigen::Index k = 0; k < filters.L.rows(); ++k)
                denom += std::norm(filters.L(k, k));
        }
        else
        {
            // ZF-dTHP: ||Q^H||_F^2 = M; ZF-cTHP: sum l_kk^-2; MMSE: tr of Q1^H (C) products.
            denom = filters.shaping().squaredNorm();
        }
        const double beta = std::sqrt(private_power / denom);
        if (!std::isfinite(beta))
            throw NumericError("beta_scaling: non-finite scaling");
        return beta;
    }

    CMatrix effective_private_columns(const ThpFilters &filters)
    {
        const Eigen::Index n = filters.B.rows();
        const CMatrix Binv = filters.B.triangularView<Eigen::Lower>().solve(CMatrix::Identity(n, n));
        return filters.beta * filters.shaping() * Binv;
    }

    CMatrix transmit_columns(const ThpFilters &filters)
    {
        return filters.beta * filters.shaping();
    }

    CMatrix zf_linear_precoder(const CMatrix &H_hat, double Etr, double delta)
    {
        check_delta(delta);
        // H^H (H H^H)^{-1} = Q^H L^{-1} for H = L Q.
        const LqFactors lq = lq_decompose(H_hat);
        const Eigen::Index n = lq.L.rows();
        const CMatrix Linv = lq.L.triangularView<Eigen::Lower>().solve(CMatrix::Identity(n, n));
        CMatrix P = lq.Q.adjoint() * Linv;
        const double private_power = Etr - delta * Etr;
        if (private_power <= 0.0)
            return CMatrix::Zero(P.rows(), P.cols());
        return std::sqrt(private_power) / P.norm() * P;
    }

    RsPrecoder build_precoder(const CMatrix &H_hat, const PrecoderSpec &spec, double Etr, double sigma_n2,
                              double delta)
    {
        check_delta(delta);
        RsPrecoder out;
        out.delta = delta;
        out.nonlinear = spec.nonlinear();
        out.p_c = common_precoder(H_hat, delta, Etr);

        if (spec.kind == PrecoderKind::LinearZF)
        {
            out.tx_cols = zf_linear_precoder(H_hat, Etr, delta);
            out.q_cols = out.tx_cols;
            out.gain = (H_hat * out.tx_cols).diagonal().cwiseAbs();
            return out;
        }

        ThpFilters f = spec.kind == PrecoderKind::ZfThp
                           ? zf_thp_filters(H_hat, spec.structure)
                           : mmse_thp_filters(H_hat, Etr, sigma_n2, spec.structure);
        f.beta = beta_scaling(f, Etr, delta, spec.cthp_rule);
        out.tx_cols = transmit_columns(f);
        out.q_cols = effective_private_columns(f);
        out.desired = f.centralized() ? CMatrix(f.beta * f.L * f.C) : CMatrix(f.beta * f.L);
        out.gain = out.desired.diagonal().cwiseAbs();
        out.filters = std::move(f);
        return out;
    }
}
