#pragma once

#include "rsthp/rates.hpp"

#include <vector>

namespace rsthp
{
    // Symbol-ordering pattern applied to the receive rows of the estimate:
    // H_(l) = T * H_hat. row_order[r] is the physical row moved to position r.
    struct Pattern
    {
        Eigen::MatrixXd T;
        int branch_index = 0; // 0-based position in the enumeration
        int user_pattern = 0; // 0-based i of T_{u,i}
        int stream_pattern = 0; // 0-based j of T_{s,j}
        std::vector<int> row_order;

        bool is_identity() const;
    };

    // T_1 = I, T_i = blockdiag(I_{i-2}, reversal of size n-i+2) for 2 <= i <= n.
    std::vector<Eigen::MatrixXd> reversal_patterns(int n);
    std::vector<Eigen::MatrixXd> user_patterns(int K);
    std::vector<Eigen::MatrixXd> stream_patterns(int Nk);

    // First L_o patterns T_u,i (x) T_s,j over the (i, j) grid, row-major, identity first.
    std::vector<Pattern> branch_patterns(int K, int Nk, int L_o);
    // Same, checking every user has the same antenna count (ConfigError otherwise).
    std::vector<Pattern> branch_patterns(const std::vector<int> &Nk, int L_o);

    // Row order of a permutation matrix; DomainError if T is not a permutation.
    std::vector<int> permutation_rows(const Eigen::MatrixXd &T);
    bool is_user_block_preserving(const Eigen::MatrixXd &T, int K, int Nk);

    struct BranchChoice
    {
        Pattern pattern;
        CMatrix H_reordered;
        std::vector<double> scores; // per-branch ASR in enumeration order
    };

    // Scores every pattern by min-common plus private average rate over
    // inner_draws error draws (one instantaneous draw under perfect CSIT) and
    // keeps the best; ties go to the lower branch index. Every branch sees the
    // same error draws in physical order.
    BranchChoice select_branch(const CMatrix &H_hat, const std::vector<Pattern> &patterns, const Scheme &scheme,
                               const SystemConfig &config, const ErrorModel &error_model, double delta,
                               int inner_draws, const RngStream &rng);
}
