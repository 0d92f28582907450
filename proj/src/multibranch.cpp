#include "rsthp/multibranch.hpp"
#include "rsthp/errors.hpp"

namespace rsthp
{
    bool Pattern::is_identity() const
    {
        return T.isIdentity(0.0);
    }

    std::vector<Eigen::MatrixXd> reversal_patterns(int n)
    {
        if (n < 1)
            throw ConfigError("pattern size must be positive");
        std::vector<Eigen::MatrixXd> out;
        out.push_back(Eigen::MatrixXd::Identity(n, n));
        for (int i = 2; i <= n; ++i)
        {
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
            const int head = i - 2;
            for (int r = 0; r < head; ++r)
                T(r, r) = 1.0;
            const int tail = n - head;
            for (int r = 0; r < tail; ++r)
                T(head + r, head + tail - 1 - r) = 1.0;
            out.push_back(T);
        }
        return out;
    }

    std::vector<Eigen::MatrixXd> user_patterns(int K)
    {
        return reversal_patterns(K);
    }

    std::vector<Eigen::MatrixXd> stream_patterns(int Nk)
    {
        return reversal_patterns(Nk);
    }

    std::vector<int> permutation_rows(const Eigen::MatrixXd &T)
    {
        if (T.rows() != T.cols())
            throw DomainError("permutation matrix must be square");
        const Eigen::Index n = T.rows();
        std::vector<int> order(static_cast<std::size_t>(n), -1);
        std::vector<bool> used(static_cast<std::size_t>(n), false);
        for (Eigen::Index r = 0; r < n; ++r)
        {
            for (Eigen::Index c = 0; c < n; ++c)
            {
                const double v = T(r, c);
                if (v == 1.0)
                {
                    if (order[static_cast<std::size_t>(r)] != -1 || used[static_cast<std::size_t>(c)])
                        throw DomainError("not a permutation matrix");
                    order[static_cast<std::size_t>(r)] = static_cast<int>(c);
                    used[static_cast<std::size_t>(c)] = true;
                }
                else if (v != 0.0)
                {
                    throw DomainError("not a permutation matrix");
                }
            }
            if (order[static_cast<std::size_t>(r)] == -1)
                throw DomainError("not a permutation matrix");
        }
        return order;
    }

    bool is_user_block_preserving(const Eigen::MatrixXd &T, int K, int Nk)
    {
        if (T.rows() != static_cast<Eigen::Index>(K) * Nk)
            return false;
        std::vector<int> order;
        try
        {
            order = permutation_rows(T);
        }
        catch (const DomainError &)
        {
            return false;
        }
        for (int k = 0; k < K; ++k)
        {
            const int src_user = order[static_cast<std::size_t>(k * Nk)] / Nk;
            for (int i = 1; i < Nk; ++i)
                if (order[static_cast<std::size_t>(k * Nk + i)] / Nk != src_user)
                    return false;
        }
        return true;
    }

    namespace
    {
        Eigen::MatrixXd kron(const Eigen::MatrixXd &A, const Eigen::MatrixXd &B)
        {
            Eigen::MatrixXd out(A.rows() * B.rows(), A.cols() * B.cols());
            for (Eigen::Index r = 0; r < A.rows(); ++r)
                for (Eigen::Index c = 0; c < A.cols(); ++c)
                    out.block(r * B.rows(), c * B.cols(), B.rows(), B.cols()) = A(r, c) * B;
            return out;
        }
    }

    std::vector<Pattern> branch_patterns(int K, int Nk, int L_o)
    {
        if (L_o < 1)
            throw ConfigError("number of branches must be at least 1");
        if (L_o > K * Nk)
            throw ConfigError("number of branches exceeds the K*Nk pattern grid");
        const auto Tu = user_patterns(K);
        const auto Ts = stream_patterns(Nk);
        std::vector<Pattern> out;
        for (int i = 0; i < K && static_cast<int>(out.size()) < L_o; ++i)
        {
            for (int j = 0; j < Nk && static_cast<int>(out.size()) < L_o; ++j)
            {
                Pattern p;
                p.T = kron(Tu[static_cast<std::size_t>(i)], Ts[static_cast<std::size_t>(j)]);
                p.branch_index = static_cast<int>(out.size());
                p.user_pattern = i;
                p.stream_pattern = j;
                p.row_order = permutation_rows(p.T);
                out.push_back(std::move(p));
            }
        }
        return out;
    }

    std::vector<Pattern> branch_patterns(const std::vector<int> &Nk, int L_o)
    {
        if (Nk.empty())
            throw ConfigError("at least one user is required");
        for (int n : Nk)
            if (n != Nk.front())
                throw ConfigError("multi-branch ordering needs the same antenna count at every user");
        return branch_patterns(static_cast<int>(Nk.size()), Nk.front(), L_o);
    }

    BranchChoice select_branch(const CMatrix &H_hat, const std::vector<Pattern> &patterns, const Scheme &scheme,
                               const SystemConfig &config, const ErrorModel &error_model, double delta,
                               int inner_draws, const RngStream &rng)
    {
        if (patterns.empty())
            throw ConfigError("select_branch: no patterns");
        const bool perfect = error_model.entry_variance(config.Etr) == 0.0;
        const int draws = perfect ? 1 : inner_draws;

        BranchChoice out;
        std::size_t best = 0;
        for (std::size_t l = 0; l < patterns.size(); ++l)
        {
            const Pattern &p = patterns[l];
            const CMatrix H_l = p.T.cast<cdouble>() * H_hat;
            const AverageRates r = average_rates(H_l, scheme, config, error_model, delta, draws, rng, p.row_order);
            out.scores.push_back(r.sum_rate());
            if (out.scores[l] > out.scores[best])
                best = l;
        }
        out.pattern = patterns[best];
        out.H_reordered = patterns[best].T.cast<cdouble>() * H_hat;
        return out;
    }
}
