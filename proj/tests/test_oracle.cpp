#include "doctest.h"
#include "orthantloop/dimshift.hpp"
#include "orthantloop/oracle.hpp"
#include "support.hpp"

using namespace oloop;
using namespace testing_support;

namespace {

MCSettings mc(long n, std::uint64_t seed = 1) {
    MCSettings m;
    m.samples = n;
    m.seed = seed;
    return m;
}

bool within(const IntegralValue& a, cplx exact, double k = 3.0) { return std::abs(a.value - exact) < k * a.abs_error; }

}  // namespace

TEST_CASE("single propagator closed form") {
    // (-1)^nu Gamma(1/2) / m
    const auto c = make_config({1.0}, RMat(1), 1.0);
    CHECK(feynman_oracle(c).value.real() == doctest::Approx(-std::sqrt(kPi)).epsilon(1e-12));
    const auto c2 = make_config({2.0}, RMat(1), 1.0);
    CHECK(feynman_oracle(c2).value.real() == doctest::Approx(-std::sqrt(kPi) / 2).epsilon(1e-12));
}

TEST_CASE("constant denominator on the simplex") {
    // equal masses, vanishing invariants: u.Sigma.u = m^2 everywhere, simplex volume 1/2
    const double m = 1.3;
    const auto c = make_config({m, m, m}, RMat(3), 3.0);
    CHECK(feynman_oracle(c).value.real() == doctest::Approx(-std::tgamma(1.5) / (2 * m * m * m)).epsilon(1e-10));
    const auto c4 = make_config({m, m, m, m}, RMat(4), 4.0);
    const auto v = feynman_oracle(c4, mc(100'000));
    CHECK(v.value.real() == doctest::Approx(1.0 / (6 * std::pow(m, 4))).epsilon(1e-12));  // no variance at all
}

TEST_CASE("orthant MC examples") {
    const auto a = orthant_mc(RMat::identity(4), mc(1'000'000));
    CHECK(std::abs(a.probability - 1.0 / 16) < 3 * a.std_error);
    const auto b = orthant_mc(equicorrelated(2, 0.5), mc(1'000'000, 2));
    CHECK(std::abs(b.probability - 1.0 / 3) < 3 * b.std_error);
    const auto c = orthant_mc(equicorrelated(3, 0.5), mc(1'000'000, 3));
    CHECK(std::abs(c.probability - 0.25) < 3 * c.std_error);
    // unnormalized covariance gives the same probability
    RMat cov = equicorrelated(2, 0.5);
    cov(0, 0) = 4.0;
    cov(0, 1) = cov(1, 0) = 1.0;
    CHECK(orthant_mc(cov, mc(100'000, 2)).probability == orthant_mc(equicorrelated(2, 0.5), mc(100'000, 2)).probability);
}

TEST_CASE("truncated moments") {
    std::mt19937_64 rng(81);
    const auto c2 = random_config(2, 2, rng, 0.8);
    const auto t2 = truncated_moment_mc(c2, mc(1'000'000, 4));
    CHECK_FALSE(t2.infinite_variance);
    CHECK(within(t2.value, j2_2d(c2).value));

    const auto c5 = random_config(5, 4, rng, 0.5);
    const auto t5 = truncated_moment_mc(c5, mc(1'000'000, 5));
    CHECK(within(t5.value, j5_4d(c5).value));

    // nu = n = N: only the orthant indicator is left
    const auto c4 = random_config(4, 4, rng, 0.6);
    const auto t4 = truncated_moment_mc(c4, mc(1'000'000, 6));
    CHECK(within(t4.value, j4_4d(c4).value));

    CHECK(truncated_moment_mc(random_config(3, 5, rng, 0.6), mc(10'000)).infinite_variance);
}

TEST_CASE("Lauricella expectation") {
    std::mt19937_64 rng(82);
    auto c2 = random_config(2, 3, rng, 0.7);
    const auto l2 = lauricella_expectation_mc(c2, mc(200'000, 7));
    CHECK(within(l2, raise_dimension(c2).value));

    const auto c3 = random_config(3, 4, rng, 0.6);
    const auto l3 = lauricella_expectation_mc(c3, mc(200'000, 8));
    const auto e = eps_expand_sigma(build_sigma(c3).entries, {1, 1, 1}, 4, 0.5, 0);
    CHECK(within(l3, e.coefficients[0].value));

    CHECK_THROWS_AS(lauricella_expectation_mc(random_config(3, 3, rng), mc(10'000)), Error);
}

TEST_CASE("oracle triangulation at two points") {
    std::mt19937_64 rng(83);
    const auto c = random_config(2, 2, rng, 0.6);
    const auto f = feynman_oracle(c);
    const auto t = truncated_moment_mc(c, mc(1'000'000, 9));
    CHECK(within(t.value, f.value));
    CHECK(rel_err(f.value, j2_2d(c).value) < 1e-8);
    auto c3 = c;
    c3.dimension.n = 3.0;
    const auto l = lauricella_expectation_mc(c3, mc(200'000, 10));
    CHECK(within(l, feynman_oracle(c3).value));
}

TEST_CASE("Monte Carlo feynman oracle matches quadrature") {
    std::mt19937_64 rng(84);
    const RMat s = random_sigma(3, rng, 0.6);
    // sampling starts at four legs
    const RMat s4 = random_sigma(4, rng, 0.6);
    const auto a = feynman_oracle_sigma(s4, {1, 1, 1, 1}, 4.0, mc(1'000'000, 11));
    CHECK(a.method == Method::monte_carlo);
    CHECK(within(a, j_unit_integer(s4, 4).value));
    const auto b = feynman_oracle_sigma(s4, {2, 1, 1, 1}, 5.0, mc(1'000'000, 12));
    const auto r = evaluate_sigma(s4, {2, 1, 1, 1}, 5.0);
    CHECK(std::abs(b.value - r.value) < 3 * b.abs_error + r.abs_error);
    CHECK(feynman_oracle_sigma(s, {1, 1, 1}, 3.0).method == Method::quadrature);
}

TEST_CASE("seeded determinism") {
    std::mt19937_64 rng(85);
    const auto c = random_config(5, 5, rng, 0.5);
    const auto a = feynman_oracle(c, mc(100'000, 42)), b = feynman_oracle(c, mc(100'000, 42));
    CHECK(a.value == b.value);
    CHECK(a.abs_error == b.abs_error);
    const auto d = feynman_oracle(c, mc(100'000, 43));
    CHECK(a.value != d.value);
    const RMat r = random_correlation(4, rng);
    CHECK(orthant_mc(r, mc(100'000, 5)).probability == orthant_mc(r, mc(100'000, 5)).probability);
}

TEST_CASE("standard error scales as one over root samples") {
    const RMat r = equicorrelated(3, 0.3);
    const auto a = orthant_mc(r, mc(20'000, 3)), b = orthant_mc(r, mc(2'000'000, 3));
    const double ratio = a.std_error / b.std_error;
    CHECK(ratio == doctest::Approx(10.0).epsilon(0.2));
    std::mt19937_64 rng(86);
    const auto c = random_config(4, 4, rng, 0.6);
    const double fa = feynman_oracle(c, mc(20'000, 3)).abs_error, fb = feynman_oracle(c, mc(2'000'000, 3)).abs_error;
    CHECK(fa / fb == doctest::Approx(10.0).epsilon(0.2));
}

TEST_CASE("settings and divergence checks") {
    std::mt19937_64 rng(87);
    CHECK_THROWS_AS(feynman_oracle(random_config(4, 4, rng), mc(100)), Error);
    MCSettings bad;
    bad.batch = 0;
    CHECK_THROWS_AS(validate(bad), Error);
    try {
        feynman_oracle(random_config(2, 4, rng));
        FAIL("expected DivergentIntegral");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DivergentIntegral);
    }
}

TEST_CASE("tensor MC with vanishing momenta") {
    // all momenta zero: J_{mu nu} = -1/2 g_{mu nu} J(n + 2)
    std::mt19937_64 rng(88);
    const RMat s = random_sigma(5, rng, 0.5);
    const std::vector<Vec4> zero(5, Vec4{0, 0, 0, 0});
    const auto t = tensor_mc(s, zero, Vec4{1, 1, 1, 1}, 4.0, mc(1'000'000, 13));
    const auto j6 = feynman_oracle_sigma(s, {1, 1, 1, 1, 1}, 6.0, mc(1'000'000, 13));
    for (int a = 0; a < 4; ++a) {
        CHECK(std::abs(t.value[a][a] + 0.5 * j6.value.real()) < 3 * (t.std_error[a][a] + 0.5 * j6.abs_error));
        for (int b = 0; b < 4; ++b)
            if (a != b) CHECK(t.value[a][b] == 0.0);
    }
}
