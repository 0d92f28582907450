#pragma once

#include "rsthp/numerics.hpp"

#include <vector>

namespace rsthp
{
    enum class CombinerKind
    {
        FirstAntenna, // plain RS receiver: decode the common stream on antenna 1
        MinMax,
        MRC,
        MMSEc
    };

    // Which channel the MMSE combiner covariance is built from.
    enum class CovarianceSource
    {
        TrueChannel, // genie covariance of the actual received signal
        Estimate     // estimate plus the expected error contribution
    };

    struct Combiner
    {
        CombinerKind kind = CombinerKind::FirstAntenna;
        CVector w;
    };

    // gamma = |w^H Hk p_c|^2 / (sum_j |w^H Hk c_j|^2 + ||w||^2 sigma_n2) where c_j are
    // the columns of private_cols (beta already absorbed).
    double combined_sinr(const CVector &w, const CMatrix &Hk, const CVector &p_c, const CMatrix &private_cols,
                         double sigma_n2);

    // Per user, argmax over antennas of the supplied ergodic common-rate table.
    // Ties resolve to the lowest antenna index. Indices are 0-based.
    std::vector<int> minmax_select(const std::vector<std::vector<double>> &table);

    CVector selection_combiner(Eigen::Index Nk, Eigen::Index antenna);

    // w = Hk p_c / ||Hk p_c||^2. Throws DomainError when Hk p_c = 0.
    CVector mrc_combiner(const CMatrix &Hk, const CVector &p_c);

    // w = R^{-1} Hk p_c with R = Hk p_c p_c^H Hk^H + sum_j Hk c_j c_j^H Hk^H + sigma_n2 I.
    CVector mmsec_combiner(const CMatrix &Hk, const CVector &p_c, const CMatrix &private_cols, double sigma_n2);

    // Same combiner with R built from the estimate and the error statistics:
    // R = Hk_hat(...)Hk_hat^H + entry_var (||p_c||^2 + ||cols||_F^2) I + sigma_n2 I.
    CVector mmsec_combiner_from_estimate(const CMatrix &Hk_hat, const CVector &p_c, const CMatrix &private_cols,
                                         double error_entry_variance, double sigma_n2);

    // Closed-form MRC SINR: ||h||^2 / (sum_j ||g_j||^2 cos^2(theta_j) + sigma_n2),
    // h = Hk p_c, g_j = Hk c_j, theta_j the angle between h and g_j.
    double mrc_sinr_closed_form(const CMatrix &Hk, const CVector &p_c, const CMatrix &private_cols, double sigma_n2);

    // Closed-form MMSE-combiner SINR written with R^{-1}:
    // |h^H R^-1 h|^2 / (sum_j |h^H R^-1 g_j|^2 + tr(R^-2 h h^H) sigma_n2).
    double mmsec_sinr_closed_form(const CMatrix &Hk, const CVector &p_c, const CMatrix &private_cols,
                                  double sigma_n2);
}
