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

QuadratureSettings tol(double r) {
    QuadratureSettings s;
    s.rel_tol = r;
    return s;
}

// fixed, well conditioned five-leg matrix
RMat sigma5() {
    std::mt19937_64 rng(500);
    return random_sigma(5, rng, 0.5);
}

}  // namespace

TEST_CASE("raise_dimension against the quadrature oracle") {
    std::mt19937_64 rng(51);
    const auto c3 = random_config(3, 5, rng, 0.7);
    CHECK(rel_err(raise_dimension(c3).value, feynman_oracle(c3).value) < 1e-5);
    const auto c2 = random_config(2, 3, rng, 0.7);
    CHECK(rel_err(raise_dimension(c2).value, feynman_oracle(c2).value) < 1e-6);
    // from the n = N - 1 base as well
    const auto c3b = random_config(3, 3, rng, 0.7);
    CHECK(rel_err(raise_dimension(c3b, {}, 2.0).value, j3_3d(c3b).value) < 1e-6);
}

TEST_CASE("raise_dimension rejects divergent and non-raising inputs") {
    std::mt19937_64 rng(52);
    try {
        raise_dimension(random_config(2, 4, rng));
        FAIL("expected DivergentIntegral");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DivergentIntegral);
    }
    CHECK_THROWS_AS(raise_dimension(random_config(3, 2, rng)), Error);
}

TEST_CASE("raise_dimension integrand decays as the declared power") {
    // (u.Sigma.u + tau)^{n/2 - nu} gives J(nu; Sigma + tau 11^T) ~ tau^{-3/2} at N = n = 3
    std::mt19937_64 rng(53);
    const RMat s = random_sigma(3, rng, 0.7);
    auto at = [&](double tau) {
        RMat m = s;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) += tau;
        return std::abs(j_unit_integer(m, 3).value);
    };
    const double slope = std::log(at(1e6) / at(1e5)) / std::log(10.0);
    CHECK(slope == doctest::Approx(-1.5).epsilon(1e-3));
}

TEST_CASE("lower_dimension against explicit and oracle routes") {
    std::mt19937_64 rng(54);
    const auto c5 = random_config(5, 4, rng, 0.6);
    CHECK(rel_err(lower_dimension(c5).value, j5_4d(c5).value) < 1e-4);
    const auto c3 = random_config(3, 2, rng, 0.7);
    CHECK(rel_err(lower_dimension(c3).value, j3_2d(c3).value) < 1e-4);
    const auto c6 = random_config(6, 4, rng, 0.5);
    const auto v = lower_dimension(c6, tol(1e-6));
    const auto o = feynman_oracle(c6, mc(1'000'000, 54));
    CHECK(std::abs(v.value - o.value) < 3 * o.abs_error + v.abs_error);
}

TEST_CASE("forward and backward shifts are consistent") {
    std::mt19937_64 rng(55);
    const auto c = random_config(3, 3, rng, 0.7);
    // J(3) from the lowered J(2) base, against the closed form
    CHECK(rel_err(raise_dimension(c, {}, 2.0).value, j3_3d(c).value) < 1e-4);
    auto c2 = c;
    c2.dimension.n = 2;
    CHECK(rel_err(lower_dimension(c2).value, j3_2d(c2).value) < 1e-4);
}

TEST_CASE("single-leg power raising") {
    const RMat s = sigma5();
    const auto contour = raise_power_single_sigma(s, 0, 2, tol(1e-8));
    const auto dup = raise_power_duplicate_sigma(s, {3, 1, 1, 1, 1});
    CHECK(rel_err(contour.value, dup.value) < 1e-4);
    // m = 0 gives back the plain function
    const auto plain = raise_power_single_sigma(s, 2, 0);
    CHECK(rel_err(plain.value, j_unit_integer(s, 5).value) < 1e-7);

    std::mt19937_64 rng(56);
    const RMat s3 = random_sigma(3, rng, 0.6);
    const auto v = raise_power_single_sigma(s3, 0, 1);
    const auto o = feynman_oracle_sigma(s3, {2, 1, 1}, 4);
    CHECK(rel_err(v.value, o.value) < 1e-6);
}

TEST_CASE("pair power raising") {
    const RMat s = sigma5();
    const auto contour = raise_power_pair_sigma(s, 1, 3, 1, tol(1e-8));
    const auto dup = raise_power_duplicate_sigma(s, {1, 2, 1, 2, 1});
    CHECK(rel_err(contour.value, dup.value) < 1e-4);

    std::mt19937_64 rng(57);
    const RMat s3 = random_sigma(3, rng, 0.6);
    const auto v = raise_power_pair_sigma(s3, 0, 1, 1);
    const auto o = feynman_oracle_sigma(s3, {2, 2, 1}, 5);
    CHECK(rel_err(v.value, o.value) < 1e-6);
}

TEST_CASE("contour transform identity on a scalar toy") {
    // (1/2 pi i) int ds Gamma(m)/s^m e^{s x} = x^{m-1}
    QuadratureSettings s;
    s.contour_abscissa_c = 0.5;
    s.rel_tol = 1e-9;
    for (int m : {2, 3}) {
        const auto v = integrate_contour([&](cplx z) { return std::tgamma(m) / std::pow(z, m) * std::exp(1.7 * z); }, s, true);
        CHECK(std::abs(v.value - std::pow(1.7, m - 1)) < 1e-6);
    }
}

TEST_CASE("duplicate-leg route") {
    std::mt19937_64 rng(58);
    const RMat s3 = random_sigma(3, rng, 0.6);
    const auto v = raise_power_duplicate_sigma(s3, {2, 1, 1});
    const auto o = feynman_oracle_sigma(s3, {2, 1, 1}, 4, mc(1'000'000, 58));
    CHECK(std::abs(v.value - o.value) < 3 * o.abs_error + v.abs_error);
    CHECK(rel_err(v.value, feynman_oracle_sigma(s3, {2, 1, 1}, 4).value) < 1e-4);

    const RMat s = sigma5();
    const auto dup = raise_power_duplicate_sigma(s, {1, 1, 2, 1, 2});
    const auto pair = raise_power_pair_sigma(s, 2, 4, 1, tol(1e-8));
    CHECK(rel_err(dup.value, pair.value) < 1e-4);

    try {
        raise_power_duplicate_sigma(s, {3, 3, 1, 1, 1});
        FAIL("expected AssemblyLimit");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::AssemblyLimit);
    }
}

TEST_CASE("augmentation is associative") {
    std::mt19937_64 rng(59);
    const RMat s = random_sigma(3, rng, 0.6);
    const double d = 1e-9;
    const RMat once = augment_sigma(s, {3, 1, 1}, d);
    const RMat twice = augment_sigma(augment_sigma(s, {2, 1, 1}, d), {1, 1, 1, 2}, d);
    CHECK(once.size() == 5);
    CHECK(twice.size() == 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) CHECK(std::abs(once(i, j) - twice(i, j)) < 1e-7);
    // copies see the other legs exactly like the original
    for (int j = 1; j < 3; ++j) {
        CHECK(once(3, j) == s(0, j));
        CHECK(once(4, j) == s(0, j));
    }
    CHECK(classify_definiteness(augment_sigma(s, {3, 1, 1}, 0.01)) == PdStatus::positive_definite);
}

TEST_CASE("shifted matrices materialize per rule") {
    const RMat s{{2.0, 0.3, 0.1}, {0.3, 1.5, 0.2}, {0.1, 0.2, 1.0}};
    ShiftedSigma sh;
    sh.base = s;
    sh.kind = ShiftKind::all_masses_plus_tau;
    sh.parameter = 0.5;
    CHECK(sh.materialize()(0, 1) == cplx(0.8));
    sh.kind = ShiftKind::all_masses_minus_s;
    sh.parameter = cplx(0.1, 2.0);
    CHECK(sh.materialize()(2, 2) == cplx(0.9, -2.0));
    sh.kind = ShiftKind::single_diagonal_minus_s;
    sh.leg = 1;
    CHECK(sh.materialize()(1, 1) == cplx(1.4, -2.0));
    CHECK(sh.materialize()(0, 0) == cplx(2.0));
    sh.kind = ShiftKind::single_offdiagonal_invariant_plus_4s;
    sh.leg = 0;
    sh.partner = 2;
    CHECK(sh.materialize()(0, 2) == cplx(0.1) - 2.0 * sh.parameter);
    CHECK(sh.materialize()(2, 0) == sh.materialize()(0, 2));
    CHECK(sh.materialize()(1, 1) == cplx(1.5));
    sh.kind = ShiftKind::column_augmented;
    sh.multiplicity = {2, 1, 1};
    sh.parameter = 0.02;
    CHECK(sh.materialize().size() == 4);
}

TEST_CASE("eps expansion leading coefficient") {
    const RMat s = sigma5();
    const auto e = eps_expand_sigma(s, {1, 1, 1, 1, 1}, 6, 0.5, 0, tol(1e-7));
    const auto r = raise_dimension_sigma(s, {1, 1, 1, 1, 1}, 6.0, 5.0, tol(1e-8));
    CHECK(e.order() == 0);
    CHECK(rel_err(e.coefficients[0].value, r.value) < 1e-4);

    std::mt19937_64 rng(60);
    const RMat s3 = random_sigma(3, rng, 0.6);
    const auto e3 = eps_expand_sigma(s3, {1, 1, 1}, 4, 1.0, 2);
    CHECK(e3.order() == 2);
    CHECK(rel_err(e3.coefficients[0].value, feynman_oracle_sigma(s3, {1, 1, 1}, 4).value) < 1e-5);
    for (const auto& c : e3.coefficients) CHECK(std::abs(c.value.imag()) < 1e-8);
}

TEST_CASE("eps expansion against a finite-eps probe") {
    std::mt19937_64 rng(61);
    const RMat s3 = random_sigma(3, rng, 0.6);
    const auto e = eps_expand_sigma(s3, {1, 1, 1}, 4, 1.0, 1);
    auto at = [&](double eps) { return raise_dimension_sigma(s3, {1, 1, 1}, 4 - 2 * eps, 3.0).value.real(); };
    // central differences; one-sided ones carry an O(c2 h) bias comparable to c1 here
    const double h = 0.01, a = at(h), b = at(-h);
    const double c0 = 0.5 * (a + b), c1 = (a - b) / (2 * h);
    CHECK(std::abs(c0 - e.coefficients[0].value.real()) < 0.01 * std::abs(e.coefficients[0].value.real()));
    CHECK(std::abs(c1 - e.coefficients[1].value.real()) < 0.01 * std::abs(e.coefficients[1].value.real()));
}

TEST_CASE("eps_expand picks the documented default shift") {
    std::mt19937_64 rng(62);
    auto c = random_config(3, 4, rng, 0.6);
    c.dimension.d = 4;
    c.dimension.epsilon_order = 1;
    const auto e = eps_expand(c);
    CHECK(e.k_shift == 0.5);  // (d - nu)/2 = 1/2
    CHECK(e.order() == 1);
    auto c5 = random_config(5, 4, rng, 0.6);
    c5.dimension.d = 4;
    c5.dimension.epsilon_order = 0;
    CHECK(eps_expand(c5).k_shift == 0.5);
}

TEST_CASE("recurrence checks") {
    std::mt19937_64 rng(63);
    const auto c4 = random_config(4, 4, rng, 0.5);
    CHECK(recurrence_check_lower(c4).residual < 1e-5);
    const auto c3 = random_config(3, 3, rng, 0.5);
    CHECK(recurrence_check_lower(c3).residual < 1e-4);

    RMat inv(3);
    inv(0, 1) = inv(1, 0) = inv(0, 2) = inv(2, 0) = inv(1, 2) = inv(2, 1) = 0.3;
    const auto m3 = make_config({1, 1, 1}, inv, 3.0);
    const auto r = recurrence_check_merge(m3);
    CHECK_FALSE(r.skipped_indefinite);
    CHECK(r.residual < 1e-5);

    const RMat s = random_sigma(4, rng, 0.6);
    const RMat e0 = sigma_eta(s, 0.0);
    const RMat minor = delete_index(s, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(e0(i, j) == minor(i, j));
    const RMat m1 = sigma_merged(s, 1.0), m0 = sigma_merged(s, 0.0);
    const RMat drop_last = delete_index(s, 3), drop_prev = delete_index(s, 2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            CHECK(m1(i, j) == doctest::Approx(drop_last(i, j)));
            CHECK(m0(i, j) == doctest::Approx(drop_prev(i, j)));
        }
}

TEST_CASE("power excess expansion") {
    RMat inv(3);
    auto c = make_config({1, 1, 1}, inv, 2.0);
    auto terms = expand_power_excess(c);
    REQUIRE(terms.size() == 3);
    for (const auto& t : terms) {
        CHECK(t.coefficient == -1.0);
        CHECK(t.n == 4.0);
        int raised = 0;
        for (int p : t.powers) raised += p - 1;
        CHECK(raised == 1);
    }

    auto c2 = make_config({1, 1}, RMat(2), 1.0);
    terms = expand_power_excess(c2);
    REQUIRE(terms.size() == 2);
    for (const auto& t : terms) CHECK(t.coefficient == -1.0);

    c2.dimension.n = 0.0;
    terms = expand_power_excess(c2);
    REQUIRE(terms.size() == 3);
    double total = 0.0;
    for (const auto& t : terms) {
        total += t.coefficient;
        if (t.powers == std::vector<int>{2, 2}) CHECK(t.coefficient == 2.0);
        // k! (1)_2 / 2! = 2, since (1)_2 = 1*2
        if (t.powers == std::vector<int>{3, 1}) CHECK(t.coefficient == 2.0);
        if (t.powers == std::vector<int>{1, 3}) CHECK(t.coefficient == 2.0);
    }
    CHECK(total == 6.0);  // sum of k! prod (nu_i)_{k_i}/k_i! is (nu_1 + nu_2)_k = (2)_2

    // the expansion evaluated numerically reproduces the lowered value
    std::mt19937_64 rng(64);
    const auto c3 = random_config(3, 2, rng, 0.6);
    cplx sum = 0.0;
    for (const auto& t : expand_power_excess(c3))
        sum += t.coefficient * evaluate_sigma(build_sigma(c3).entries, t.powers, t.n).value;
    CHECK(rel_err(sum, j3_2d(c3).value) < 1e-5);
}

TEST_CASE("route equivalence on one raised config") {
    std::mt19937_64 rng(65);
    const RMat s = random_sigma(4, rng, 0.6);
    const std::vector<int> p{2, 1, 1, 1};
    const auto a = evaluate_sigma(s, p, 5.0, tol(1e-8), PowerRoute::contour);
    const auto b = evaluate_sigma(s, p, 5.0, tol(1e-8), PowerRoute::duplicate);
    CHECK(std::abs(a.value - b.value) < 3 * (a.abs_error + b.abs_error) + 1e-4 * std::abs(a.value));
}
