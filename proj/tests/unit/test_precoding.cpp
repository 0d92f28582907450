#include "support.hpp"

#include "rsthp/errors.hpp"
#include "rsthp/precoding.hpp"

using namespace rsthp;
using test::max_abs;

namespace
{
    const ThpStructure kStructures[] = {ThpStructure::Centralized, ThpStructure::Decentralized};
}

TEST_CASE("ZF filters invert the estimate through L", "[precoding]")
{
    RngStream rng(31);
    for (int t = 0; t < 20; ++t)
    {
        const CMatrix H = test::random_matrix(12, 12, rng);
        for (auto st : kStructures)
        {
            const ThpFilters f = zf_thp_filters(H, st);
            CHECK(max_abs(H * f.F - f.L) < 1e-9);
            for (Eigen::Index i = 0; i < 12; ++i)
            {
                CHECK(f.B(i, i) == cdouble(1.0));
                CHECK(f.C(i, i).real() > 0.0);
                CHECK(f.C(i, i).imag() == 0.0);
                for (Eigen::Index j = i + 1; j < 12; ++j)
                {
                    CHECK(f.B(i, j) == cdouble(0.0));
                    CHECK(f.C(i, j) == cdouble(0.0));
                }
            }
        }
    }
}

TEST_CASE("Identity channel gives scaled identity columns", "[precoding]")
{
    const CMatrix I = CMatrix::Identity(4, 4);
    RsPrecoder p = build_precoder(I, {PrecoderKind::ZfThp, ThpStructure::Decentralized}, 8.0, 1.0, 0.0);
    CHECK(max_abs(p.filters.B - I) < 1e-15);
    CHECK(std::abs(p.filters.beta - std::sqrt(2.0)) < 1e-15);
    CHECK(max_abs(p.q_cols - std::sqrt(2.0) * I) < 1e-15);

    const CMatrix P = zf_linear_precoder(I, 8.0, 0.5);
    CHECK(max_abs(P - I) < 1e-15);
}

TEST_CASE("Perfect-CSIT end-to-end matrices", "[precoding]")
{
    RngStream rng(32);
    for (int t = 0; t < 100; ++t)
    {
        const CMatrix H = test::random_matrix(12, 12, rng);
        const RsPrecoder c = build_precoder(H, {PrecoderKind::ZfThp, ThpStructure::Centralized}, 100.0, 1.0, 0.3);
        const RsPrecoder d = build_precoder(H, {PrecoderKind::ZfThp, ThpStructure::Decentralized}, 100.0, 1.0, 0.3);
        const CMatrix Ec = H * c.q_cols;
        const CMatrix Ed = H * d.q_cols;
        CHECK(max_abs(Ec - c.filters.beta * CMatrix::Identity(12, 12)) < 1e-9 * c.filters.beta);
        CMatrix target = CMatrix::Zero(12, 12);
        for (int i = 0; i < 12; ++i)
            target(i, i) = d.filters.beta * d.filters.L(i, i);
        CHECK(max_abs(Ed - target) < 1e-9 * max_abs(target));
        // The modulo-domain columns land exactly on the desired lattice component.
        CHECK(max_abs(H * c.tx_cols - c.desired) < 1e-9 * max_abs(c.desired));
        CHECK(max_abs(H * d.tx_cols - d.desired) < 1e-9 * max_abs(d.desired));
    }
}

TEST_CASE("Transmit power budget holds for every design and structure", "[precoding]")
{
    RngStream rng(33);
    for (int t = 0; t < 20; ++t)
    {
        const CMatrix H = test::random_matrix(12, 12, rng);
        for (auto kind : {PrecoderKind::ZfThp, PrecoderKind::MmseThp, PrecoderKind::LinearZF})
            for (auto st : kStructures)
                for (double delta : {0.0, 0.25, 0.9})
                {
                    const RsPrecoder p = build_precoder(H, {kind, st}, 100.0, 1.0, delta);
                    const double total = p.p_c.squaredNorm() + p.tx_cols.squaredNorm();
                    CHECK(test::rel_diff(total, 100.0) < 1e-9);
                    CHECK(test::rel_diff(p.p_c.squaredNorm() + 1.0, delta * 100.0 + 1.0) < 1e-12);
                }
    }
}

TEST_CASE("Beta rules for the centralized ZF structure", "[precoding]")
{
    RngStream rng(34);
    const CMatrix H = test::random_matrix(6, 6, rng);
    ThpFilters f = zf_thp_filters(H, ThpStructure::Centralized);
    double inv_sq = 0.0, sq = 0.0;
    for (int k = 0; k < 6; ++k)
    {
        inv_sq += 1.0 / std::norm(f.L(k, k));
        sq += std::norm(f.L(k, k));
    }
    CHECK(test::rel_diff(beta_scaling(f, 50.0, 0.2), std::sqrt(40.0 / inv_sq)) < 1e-13);
    CHECK(test::rel_diff(beta_scaling(f, 50.0, 0.2, CthpBetaRule::Literal), std::sqrt(40.0 / sq)) < 1e-13);

    ThpFilters d = zf_thp_filters(H, ThpStructure::Decentralized);
    CHECK(test::rel_diff(beta_scaling(d, 50.0, 0.2), std::sqrt(40.0 / 6.0)) < 1e-13);
    CHECK(beta_scaling(d, 50.0, 1.0) == 0.0);
    CHECK_THROWS_AS(beta_scaling(d, 50.0, 1.5), DomainError);
}

TEST_CASE("All private power on the common stream", "[precoding]")
{
    RngStream rng(35);
    const CMatrix H = test::random_matrix(12, 12, rng);
    const RsPrecoder p = build_precoder(H, {PrecoderKind::ZfThp, ThpStructure::Centralized}, 100.0, 1.0, 1.0);
    CHECK(p.filters.beta == 0.0);
    CHECK(p.tx_cols.isZero(0.0));
    CHECK(test::rel_diff(p.p_c.squaredNorm(), 100.0) < 1e-12);
}

TEST_CASE("Common precoder follows the dominant right singular direction", "[precoding]")
{
    RngStream rng(36);
    const CMatrix H = test::random_matrix(12, 12, rng);
    const CVector p = common_precoder(H, 0.4, 100.0);
    CHECK(test::rel_diff(p.squaredNorm(), 40.0) < 1e-12);
    const SvdFactors s = svd(H);
    CHECK(test::rel_diff((H * p).norm(), s.S(0) * p.norm()) < 1e-10);
    CHECK(common_precoder(H, 0.0, 100.0).isZero(0.0));
}

TEST_CASE("MMSE filters factor the extended channel", "[precoding]")
{
    RngStream rng(37);
    const CMatrix H = test::random_matrix(12, 12, rng);
    for (auto st : kStructures)
    {
        const ThpFilters f = mmse_thp_filters(H, 100.0, 1.0, st);
        // H = L Q1 with Q1 = F^H.
        CHECK(max_abs(f.L * f.F.adjoint() - H) < 1e-10);
        CHECK(std::abs(mmse_regularizer(12, 100.0, 1.0) - std::sqrt(0.12)) < 1e-15);
        for (Eigen::Index i = 0; i < 12; ++i)
            CHECK(f.B(i, i) == cdouble(1.0));
    }
}

TEST_CASE("MMSE filters approach ZF as the regularizer vanishes", "[precoding]")
{
    RngStream rng(38);
    for (int t = 0; t < 10; ++t)
    {
        const CMatrix H = test::random_matrix(12, 12, rng);
        const double r = 1e-12 * mmse_regularizer(12, 100.0, 1.0);
        for (auto st : kStructures)
        {
            const ThpFilters z = zf_thp_filters(H, st);
            const ThpFilters m = mmse_thp_filters_with_regularizer(H, r, st);
            CHECK(relative_frobenius_error(z.F, m.F) < 1e-6);
            CHECK(relative_frobenius_error(z.B, m.B) < 1e-6);
            CHECK(relative_frobenius_error(z.C, m.C) < 1e-6);
            CHECK(relative_frobenius_error(z.L, m.L) < 1e-6);
        }
    }
}

TEST_CASE("Linear ZF diagonalizes the estimate", "[precoding]")
{
    RngStream rng(39);
    const CMatrix H = test::random_matrix(12, 12, rng);
    const CMatrix P = zf_linear_precoder(H, 100.0, 0.3);
    CMatrix E = H * P;
    CHECK(test::rel_diff(P.squaredNorm(), 70.0) < 1e-10);
    const double scale = E.diagonal().cwiseAbs().maxCoeff();
    E.diagonal().setZero();
    CHECK(max_abs(E) < 1e-9 * scale);
}

TEST_CASE("Effective columns unroll the feedback loop", "[precoding]")
{
    RngStream rng(40);
    const CMatrix H = test::random_matrix(8, 8, rng);
    for (auto st : kStructures)
    {
        ThpFilters f = zf_thp_filters(H, st);
        f.beta = 1.7;
        const CMatrix q = effective_private_columns(f);
        CHECK(max_abs(q * f.B - transmit_columns(f)) < 1e-10);
    }
}

TEST_CASE("Rank-deficient estimates are reported", "[precoding]")
{
    RngStream rng(41);
    CMatrix H = test::random_matrix(4, 4, rng);
    H.row(3) = H.row(1);
    CHECK_THROWS_AS(zf_thp_filters(H, ThpStructure::Centralized), RankError);
    CHECK_THROWS_AS(zf_linear_precoder(H, 10.0, 0.0), RankError);
}
