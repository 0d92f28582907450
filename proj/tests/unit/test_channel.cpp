#include "support.hpp"

#include "rsthp/channel.hpp"
#include "rsthp/errors.hpp"

using namespace rsthp;

TEST_CASE("Default system is the 12-antenna six-user downlink", "[channel]")
{
    SystemConfig c;
    CHECK(c.K() == 6);
    CHECK(c.Nr() == 12);
    CHECK(c.user_offset(0) == 0);
    CHECK(c.user_offset(5) == 10);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("System validation rejects unsupported shapes", "[channel]")
{
    SystemConfig c;
    c.Nt = 10;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SystemConfig{};
    c.M = 11;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SystemConfig{};
    c.Nk = {};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SystemConfig{};
    c.Etr = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SystemConfig{};
    c.mc_errors = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("Error variance conventions", "[channel]")
{
    const auto a = ErrorModel::fixed(0.05);
    const auto b = ErrorModel::fixed(0.05, ErrorConvention::PerComponent);
    CHECK(a.entry_variance(100.0) == 0.05);
    CHECK(b.entry_variance(100.0) == 0.1);
    CHECK(b.nominal_variance(100.0) == 0.05);

    const auto s = ErrorModel::scaled(0.95, 0.6);
    CHECK(std::abs(s.nominal_variance(100.0) - 0.95 * std::pow(100.0, -0.6)) < 1e-15);
    CHECK(s.nominal_variance(1000.0) < s.nominal_variance(100.0));

    CHECK_THROWS_AS(ErrorModel::fixed(-0.1).validate(), ConfigError);
    CHECK_THROWS_AS(ErrorModel::scaled(0.95, 1.5).validate(), ConfigError);
}

TEST_CASE("Estimate and error draws have the configured statistics", "[channel]")
{
    SystemConfig c;
    RngStream rng(21);
    double est = 0.0, err = 0.0;
    const auto em = ErrorModel::fixed(0.2);
    for (int i = 0; i < 200; ++i)
    {
        est += generate_estimate(c, rng).cwiseAbs2().mean();
        err += draw_error(c, em, c.Etr, rng).cwiseAbs2().mean();
    }
    CHECK(std::abs(est / 200 - 1.0) < 0.02);
    CHECK(std::abs(err / 200 - 0.2) < 0.004);
    CHECK(draw_error(c, ErrorModel::fixed(0.0), c.Etr, rng).isZero(0.0));
}

TEST_CASE("Assemble adds the error to the estimate", "[channel]")
{
    RngStream rng(22);
    const CMatrix A = test::random_matrix(3, 4, rng);
    const CMatrix E = test::random_matrix(3, 4, rng);
    const ChannelSet s = assemble(A, E);
    CHECK(test::max_abs(s.H_true - (A + E)) == 0.0);
    CHECK_THROWS_AS(assemble(A, test::random_matrix(4, 4, rng)), DomainError);
}
