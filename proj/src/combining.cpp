#include "rsthp/combining.hpp"
#include "rsthp/errors.hpp"

#include <cmath>

namespace rsthp
{
    namespace
    {
        CMatrix received_covariance(const CVector &h, const CMatrix &G, double sigma_n2)
        {
            const Eigen::Index n = h.size();
            CMatrix R = h * h.adjoint();
            if (G.cols() > 0)
                R.noalias() += G * G.adjoint();
            R += sigma_n2 * CMatrix::Identity(n, n);
            return R;
        }
    }

    double combined_sinr(const CVector &w, const CMatrix &Hk, const CVector &p_c, const CMatrix &private_cols,
                         double sigma_n2)
    {
        if (w.size() != Hk.rows() || Hk.cols() != p_c.size() ||
            (private_cols.cols() > 0 && private_cols.rows() != Hk.cols()))
            throw DomainError("combined_sinr: inconsistent shapes");
        const double wn2 = w.squaredNorm();
        if (!(wn2 > 0.0))
            throw DomainError("combined_sinr: zero combiner");

        const cdouble signal = w.dot(Hk * p_c); // w^H Hk p_c
        double interference = 0.0;
        if (private_cols.cols() > 0)
        {
            const Eigen::RowVectorXcd wg = w.adjoint() * (Hk * private_cols);
            interference = wg.squaredNorm();
        }
        return std::norm(signal) / (interference + wn2 * sigma_n2);
    }

    std::vector<int> minmax_select(const std::vector<std::vector<double>> &table)
    {
        std::vector<int> out;
        out.reserve(table.size());
        for (const auto &row : table)
        {
            if (row.empty())
                throw DomainError("minmax_select: user without antennas");
            int best = 0;
            for (std::size_t i = 1; i < row.size(); ++i)
                if (row[i] > row[static_cast<std::size_t>(best)])
                    best = static_cast<int>(i);
            out.push_back(best);
        }
        return out;
    }

    CVector selection_combiner(Eigen::Index Nk, Eigen::Index antenna)
    {
        if (antenna < 0 || antenna >= Nk)
            throw DomainError("selection_combiner: antenna index out of range");
        CVector w = CVector::Zero(Nk);
        w(antenna) = 1.0;
        return w;
    }

    CVector mrc_combiner(const CMatrix &Hk, const CVector &p_c)
    {
        const CVector h = Hk * p_c;
        const double n2 = h.squaredNorm();
        if (!(n2 > 0.0))
            throw DomainError("mrc_combiner: zero effective common channel");
        return h / n2;
    }

    CVector mmsec_combiner(const CMatrix &Hk, const CVector &p_c, const CMatrix &private_cols, double sigma_n2)
    {
        const CVector h = Hk * p_c;
        const CMatrix G = private_cols.cols() > 0 ? CMatrix(Hk * private_cols) : CMatrix(Hk.rows(), 0);
        return received_covariance(h, G, sigma_n2).ldlt().solve(h);
    }

    CVector mmsec_combiner_from_estimate(const CMatrix &Hk_hat, const CVector &p_c, const CMatrix &private_cols,
                                         double error_entry_variance, double sigma_n2)
    {
        const double error_power = error_entry_variance * (p_c.squaredNorm() + private_cols.squaredNorm());
        const CVector h = Hk_hat * p_c;
        const CMatrix G = private_cols.cols() > 0 ? CMatrix(Hk_hat * private_cols) : CMatrix(Hk_hat.rows(), 0);
        return received_covariance(h, G, sigma_n2 + error_power).ldlt().solve(h);
    }

    double mrc_sinr_closed_form(const CMatrix &Hk, const CVector &p_c, const CMatrix &private_cols, double sigma_n2)
    {
        const CVector h = Hk * p_c;
        const double hn2 = h.squaredNorm();
        if (!(hn2 > 0.0))
            throw DomainError("mrc_sinr_closed_form: zero effective common channel");
        double interference = 0.0;
        for (Eigen::Index j = 0; j < private_cols.cols(); ++j)
        {
            const CVector g = Hk * private_cols.col(j);
            const double gn2 = g.squaredNorm();
            if (gn2 == 0.0)
                continue;
            const double cos2 = std::norm(h.dot(g)) / (hn2 * gn2);
            interference += gn2 * cos2;
        }
        return hn2 / (interference + sigma_n2);
    }

    double mmsec_sinr_closed_form(const CMatrix &Hk, const CVector &p_c, const CMatrix &private_cols,
                                  double sigma_n2)
    {
        const CVector h = Hk * p_c;
        const CMatrix G = private_cols.cols() > 0 ? CMatrix(Hk * private_cols) : CMatrix(Hk.rows(), 0);
        const CMatrix R = received_covariance(h, G, sigma_n2);
        const CMatrix Rinv = R.inverse();
        const cdouble num = h.dot(Rinv * h);
        double interference = 0.0;
        for (Eigen::Index j = 0; j < G.cols(); ++j)
            interference += std::norm(h.dot(Rinv * G.col(j)));
        const cdouble noise = (Rinv * Rinv * h * h.adjoint()).trace();
        return std::norm(num) / (interference + noise.real() * sigma_n2);
    }
}
