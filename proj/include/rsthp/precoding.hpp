#pragma once

#include "rsthp/numerics.hpp"

namespace rsthp
{
    enum class ThpDesign
    {
        ZF,
        MMSE
    };

    // Centralized THP keeps the diagonal scaling C at the transmitter; the
    // decentralized structure applies it at each receiver.
    enum class ThpStructure
    {
        Centralized,
        Decentralized
    };

    // ZF-cTHP power normalization. TransmitPower divides by sum_k l_kk^-2, the
    // actual power of the Q^H C columns. Literal divides by sum_k l_kk^2 and is
    // kept only for comparison runs; it does not meet the power budget.
    enum class CthpBetaRule
    {
        TransmitPower,
        Literal
    };

    struct ThpFilters
    {
        ThpDesign design = ThpDesign::ZF;
        ThpStructure structure = ThpStructure::Decentralized;
        CMatrix F; // Nt x Nr antenna-domain feedforward (Q^H, or Q1^H for MMSE)
        CMatrix B; // Nr x Nr feedback, lower triangular with unit diagonal
        CMatrix C; // Nr x Nr diagonal, inverse of diag(L)
        CMatrix L; // lower LQ factor (of the extended channel for MMSE)
        double beta = 1.0;

        Eigen::Index streams() const { return B.rows(); }
        bool centralized() const { return structure == ThpStructure::Centralized; }
        // F for dTHP, F*C for cTHP: maps v to antennas before the beta scaling.
        CMatrix shaping() const;
    };

    ThpFilters zf_thp_filters(const CMatrix &H_hat, ThpStructure structure);
    ThpFilters mmse_thp_filters(const CMatrix &H_hat, double Etr, double sigma_n2, ThpStructure structure);

    // Regularizer sqrt(Nr sigma_n2 / Etr) of the extended channel [H_hat, r I].
    double mmse_regularizer(Eigen::Index Nr, double Etr, double sigma_n2);
    ThpFilters mmse_thp_filters_with_regularizer(const CMatrix &H_hat, double regularizer, ThpStructure structure);

    // Dominant right singular direction of H_hat scaled to ||p_c||^2 = delta*Etr.
    CVector common_precoder(const CMatrix &H_hat, double delta, double Etr);

    // Private-stream scaling so that the private streams use (1-delta)*Etr.
    // delta = 1 returns 0 (no private power).
    double beta_scaling(const ThpFilters &filters, double Etr, double delta,
                        CthpBetaRule rule = CthpBetaRule::TransmitPower);

    // q_{b_j} = beta * shaping * B^{-1} e_j: the antenna-domain direction taken by
    // data symbol s_j once the feedback loop is unrolled (modulo ignored).
    CMatrix effective_private_columns(const ThpFilters &filters);

    // beta * shaping: the columns actually multiplying the modulo outputs v_j.
    CMatrix transmit_columns(const ThpFilters &filters);

    // Linear ZF baseline: columns of H^H (H H^H)^{-1}, scaled to (1-delta)*Etr.
    CMatrix zf_linear_precoder(const CMatrix &H_hat, double Etr, double delta);

    enum class PrecoderKind
    {
        LinearZF,
        ZfThp,
        MmseThp
    };

    struct PrecoderSpec
    {
        PrecoderKind kind = PrecoderKind::ZfThp;
        ThpStructure structure = ThpStructure::Decentralized;
        CthpBetaRule cthp_rule = CthpBetaRule::TransmitPower;

        bool nonlinear() const { return kind != PrecoderKind::LinearZF; }
    };

    // Everything the rate and symbol paths need for one channel estimate.
    struct RsPrecoder
    {
        CVector p_c;
        double delta = 0.0;
        bool nonlinear = false;
        CMatrix q_cols;  // effective (s-domain) private columns, beta absorbed
        CMatrix tx_cols; // transmit (v-domain) private columns, beta absorbed
        // THP only: beta * L * (C for cTHP): the part of H_hat * tx_cols that the
        // feedback loop turns into lattice-shifted data, diag(gain) * B.
        CMatrix desired;
        RVector gain; // per-stream amplitude of the desired data component
        ThpFilters filters; // empty for the linear precoder

        Eigen::Index streams() const { return tx_cols.cols(); }
    };

    RsPrecoder build_precoder(const CMatrix &H_hat, const PrecoderSpec &spec, double Etr, double sigma_n2,
                              double delta);
}
