// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "orthantloop/cli.hpp"
#include "orthantloop/dimshift.hpp"
#include "orthantloop/oracle.hpp"
#include "orthantloop/tensor.hpp"
#include "support.hpp"
#include "tensor_support.hpp"

using namespace oloop;
using namespace testing_support;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

MCSettings mc(long n, std::uint64_t seed) {
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

constexpr long kMC = 10'000'000;

struct Verdict {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [fail: " << what << "]";
        }
    }
};

// Pair integral by nested quadrature of the folded principal-value integrand.
double pair_integral_2d(double rho) {
    QuadratureSettings s;
    s.rel_tol = 1e-11;
    s.abs_tol = 1e-14;
    auto outer = [&](double t) {
        const double phi = t * kPi / 2;
        const double cs = std::cos(phi) * std::sin(phi);
        auto inner = [&](double r) {
            const double x = rho * r * r * cs;
            // exp(-r^2/2) sinh(x)/x with the exponents merged, no overflow at large r
            const double g = -0.5 * r * r;
            const double w = std::abs(x) < 1e-8 ? std::exp(g) * (1.0 + x * x / 6)
                                                : (std::exp(g + x) - std::exp(g - x)) / (2.0 * x);
            return cplx(r * w * rho);
        };
        return cplx(-4.0 * (kPi / 2) * integrate_0inf(inner, s).value.real());
    };
    return integrate_01(outer, s).value.real();
}

// |a - b| within k combined standard deviations
bool agree(cplx a, double ea, cplx b, double eb, double k = 3.0) {
    return std::abs(a - b) < k * std::sqrt(ea * ea + eb * eb);
}

void c1(Verdict& v) {
    std::mt19937_64 rng(1001);
    double worst = 0.0;
    const auto t0 = Clock::now();
    for (int t = 0; t < 20; ++t) {
        const auto c = random_config(2, 2, rng, 0.99);
        worst = std::max(worst, rel_err(j2_2d(c).value, feynman_oracle(c).value));
    }
    const double sec = seconds_since(t0);
    v.detail << "max rel err " << worst << ", " << sec << " s";
    v.require(worst <= 1e-6, "rel err > 1e-6");
    v.require(sec < 1.0, "slower than 1 s");
}

void c2(Verdict& v) {
    std::mt19937_64 rng(1002);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const auto c = random_config(3, 3, rng, 0.9);
        worst = std::max(worst, rel_err(j3_3d(c).value, feynman_oracle(c).value));
    }
    v.detail << "max rel err " << worst;
    v.require(worst <= 1e-6, "rel err > 1e-6");
}

void c3(Verdict& v) {
    std::mt19937_64 rng(1003);
    double worst = 0.0;
    for (int n = 2; n <= 5; ++n) {
        const RMat r = random_correlation(n, rng, 0.7);
        const auto p = orthant_probability(r);
        const auto est = orthant_mc(r, mc(kMC, 300 + n));
        const double z = std::abs(p.value - est.probability) / est.std_error;
        worst = std::max(worst, z);
        v.require(z < 3.0, "N=" + std::to_string(n) + " outside 3 sigma");
    }
    const double exact = orthant_probability(equicorrelated(3, 0.5)).value;
    const auto est = orthant_mc(equicorrelated(3, 0.5), mc(kMC, 399));
    const double z = std::abs(est.probability - 0.25) / est.std_error;
    v.detail << "max |z| " << worst << ", equicorrelated formula " << exact << " mc z " << z;
    v.require(std::abs(exact - 0.25) < 1e-14, "formula misses 1/4");
    v.require(z < 3.0, "mc misses 1/4");
}

void c4(Verdict& v) {
    double worst = 0.0;
    for (double r : {0.9, -0.9, 0.5, -0.5, 0.1, -0.1}) worst = std::max(worst, std::abs(i_pair(r) - pair_integral_2d(r)));
    v.detail << "max abs diff " << worst;
    v.require(worst <= 1e-8, "diff > 1e-8");
}

void c5(Verdict& v) {
    std::mt19937_64 rng(1005);
    double anchor = 0.0, zmax = 0.0;
    for (int t = 0; t < 10; ++t) {
        const RMat r = random_correlation(4, rng, 0.8);
        const double q0 = i_quad(r, 0);
        for (int a = 1; a < 4; ++a) anchor = std::max(anchor, std::abs(i_quad(r, a) - q0));
        double arcs = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) arcs += (2 / kPi) * std::asin(r(i, j));
        const auto est = orthant_mc(r, mc(kMC, 500 + t));
        const double z = std::abs(16 * est.probability - 1 - arcs - q0) / (16 * est.std_error);
        zmax = std::max(zmax, z);
    }
    v.detail << "anchor spread " << anchor << ", max |z| " << zmax;
    v.require(anchor <= 1e-6, "anchor spread > 1e-6");
    v.require(zmax < 3.0, "MC identity outside 3 sigma");
}

void c6(Verdict& v) {
    std::mt19937_64 rng(1006);
    double zmax = 0.0, tmax = 0.0;
    for (int t = 0; t < 5; ++t) {
        const RMat r = random_correlation(6, rng, 0.6);
        const auto t0 = Clock::now();
        const double h = i_hex(r);
        tmax = std::max(tmax, seconds_since(t0));
        const auto br = orthant_breakdown(r);
        const auto est = orthant_mc(r, mc(kMC, 600 + t));
        const double z = std::abs(64 * est.probability - (1 + br.pair_sum + br.quad_sum - h)) / (64 * est.std_error);
        zmax = std::max(zmax, z);
    }
    v.detail << "max |z| " << zmax << ", slowest i_hex " << tmax << " s";
    v.require(zmax < 3.0, "outside 3 sigma");
    v.require(tmax <= 60.0, "slower than 60 s");
}

void c7(Verdict& v) {
    std::mt19937_64 rng(1007);
    const std::pair<int, int> cases[] = {{4, 4}, {5, 5}, {6, 6}, {7, 7}, {5, 4}};
    for (auto [N, n] : cases) {
        double zmax = 0.0;
        for (int t = 0; t < 5; ++t) {
            const auto c = random_config(N, n, rng, 0.6);
            IntegralValue e;
            if (N == 4) e = j4_4d(c);
            else if (N == 5 && n == 5) e = j5_5d(c);
            else if (N == 5) e = j5_4d(c);
            else if (N == 6) e = j6_6d(c);
            else e = j7_7d(c);
            const auto o = feynman_oracle(c, mc(kMC, 700 + 10 * N + n + 100 * t));
            const double z = std::abs(e.value - o.value) / std::hypot(o.abs_error, e.abs_error);
            zmax = std::max(zmax, z);
        }
        v.detail << (N > 4 ? " J" : "J") << N << "(" << n << ") max|z| " << zmax << ";";
        v.require(zmax < 3.0, "J" + std::to_string(N) + "(" + std::to_string(n) + ") outside 3 sigma");
    }
}

void c8(Verdict& v) {
    std::mt19937_64 rng(1008);
    const auto c4 = random_config(4, 4, rng, 0.5);
    const double lo = recurrence_check_lower(c4).residual;
    RMat inv(3);
    inv(0, 1) = inv(1, 0) = 0.3;
    inv(0, 2) = inv(2, 0) = 0.4;
    inv(1, 2) = inv(2, 1) = 0.2;
    const auto m = recurrence_check_merge(make_config({1.0, 1.05, 0.95}, inv, 3.0));
    v.detail << "lower residual " << lo << ", merge residual " << m.residual;
    v.require(lo < 1e-5, "lower residual");
    v.require(!m.skipped_indefinite, "merge skipped");
    v.require(m.residual < 1e-5, "merge residual");
}

void c9(Verdict& v) {
    std::mt19937_64 rng(1009);
    const auto c3 = random_config(3, 5, rng, 0.7);
    const double a = rel_err(raise_dimension(c3).value, feynman_oracle(c3).value);
    const auto c5 = random_config(5, 4, rng, 0.6);
    const double b = rel_err(lower_dimension(c5).value, j5_4d(c5).value);
    v.detail << "raise J3(5) rel " << a << ", lower J5(4) rel " << b;
    v.require(a <= 1e-4, "raise");
    v.require(b <= 1e-4, "lower");
}

void c10(Verdict& v) {
    std::mt19937_64 rng(1010);
    double worst = 0.0;
    for (int N = 3; N <= 5; ++N) {
        const RMat s = random_sigma(N, rng, 0.5);
        std::vector<int> single(N, 1), pair(N, 1);
        single[0] = 2;
        pair[0] = pair[1] = 2;
        const auto sc = raise_power_single_sigma(s, 0, 1, tol(1e-8));
        const auto sd = raise_power_duplicate_sigma(s, single);
        const auto pc = raise_power_pair_sigma(s, 0, 1, 1, tol(1e-8));
        const auto pd = raise_power_duplicate_sigma(s, pair);
        const double e1 = rel_err(sc.value, sd.value), e2 = rel_err(pc.value, pd.value);
        worst = std::max({worst, e1, e2});
        v.detail << (N > 3 ? " N=" : "N=") << N << " single " << e1 << " pair " << e2 << ";";
        if (N == 3) {
            // the Feynman quadrature oracle is exact enough to referee all three
            const double o1 = rel_err(sc.value, feynman_oracle_sigma(s, single, 4.0).value);
            const double o2 = rel_err(pc.value, feynman_oracle_sigma(s, pair, 5.0).value);
            worst = std::max({worst, o1, o2});
        }
    }
    v.require(worst <= 1e-3, "routes disagree beyond 1e-3");
}

void c11(Verdict& v) {
    std::mt19937_64 rng(1011);
    const RMat s = random_sigma(5, rng, 0.5);
    const std::vector<int> p(5, 1);
    const auto e = eps_expand_sigma(s, p, 6, 0.5, 1, tol(1e-8));
    const auto r = raise_dimension_sigma(s, p, 6.0, 5.0, tol(1e-9));
    const double e0 = rel_err(e.coefficients[0].value, r.value);
    auto at = [&](double eps) { return raise_dimension_sigma(s, p, 6.0 - 2 * eps, 5.0, tol(1e-10)).value.real(); };
    // Richardson on central differences at h and h/2; both estimates have even error series
    const double h = 0.02;
    const double fp = at(h), fm = at(-h), gp = at(0.5 * h), gm = at(-0.5 * h);
    const double c0 = (4 * 0.5 * (gp + gm) - 0.5 * (fp + fm)) / 3;
    const double c1 = (4 * (gp - gm) / h - (fp - fm) / (2 * h)) / 3;
    const double r0 = std::abs(c0 / e.coefficients[0].value.real() - 1);
    const double r1 = std::abs(c1 / e.coefficients[1].value.real() - 1);
    v.detail << "c0 vs raise " << e0 << ", probe c0 " << r0 << " c1 " << r1;
    v.require(e0 <= 1e-4, "c0 vs raise_dimension");
    v.require(r0 <= 0.05 && r1 <= 0.05, "finite-eps probe");
}

void c12(Verdict& v) {
    // degeneracy on a regular simplex
    const auto sym = symmetric_five();
    TensorOptions so;
    so.order = 0;
    const auto red = reduce_rank2_5pt(sym, so, tol(1e-5));
    bool same = true;
    for (int k = 1; k < 5; ++k)
        same = same && red.diag_coefficients[k].coefficients[0].value == red.diag_coefficients[0].coefficients[0].value;
    for (int k = 0; k < 5; ++k)
        for (int l = 0; l < 5; ++l)
            if (k != l)
                same = same && red.offdiag_coefficients[k][l].coefficients[0].value ==
                                   red.offdiag_coefficients[0][1].coefficients[0].value;
    v.require(same, "symmetric families differ");

    // offdiag by contour and by repeated legs
    std::mt19937_64 rng(1012);
    const RMat s = random_sigma(5, rng, 0.5);
    const auto a = tensor_family(s, 1, 3, 0, tol(1e-6), PowerRoute::contour);
    const auto b = tensor_family(s, 1, 3, 0, tol(1e-5), PowerRoute::duplicate);
    const double route = rel_err(a.coefficients[0].value, b.coefficients[0].value);
    v.require(route <= 1e-3, "offdiag routes");

    // full reduction against the direct tensor-numerator MC at one point
    std::string path = std::string(ORTHANTLOOP_SOURCE_DIR) + "/configs/five_point.cfg";
    const auto pc = parse_config(path);
    TensorOptions opt;
    opt.order = 0;
    opt.momenta = pc.momenta;
    opt.metric = pc.metric;
    auto cfg = pc.config;
    const auto full = reduce_rank2_5pt(cfg, opt, tol(1e-6));
    const auto t = assemble_rank2(full, 0);
    const auto est = tensor_mc(build_sigma(cfg).entries, *pc.momenta, pc.metric, 4.0, mc(kMC, 1212));
    double zmax = 0.0;
    for (int m = 0; m < 4; ++m)
        for (int n = m; n < 4; ++n) zmax = std::max(zmax, std::abs(t[m][n].real() - est.value[m][n]) / est.std_error[m][n]);
    v.detail << "degenerate " << (same ? "yes" : "no") << ", route rel " << route << ", tensor MC max|z| " << zmax;
    v.require(zmax < 3.0, "tensor MC outside 3 sigma");
}

void c13(Verdict& v) {
    const auto path = (std::filesystem::temp_directory_path() / "orthantloop_acceptance_det.cfg").string();
    std::ofstream(path) << "[legs]\nmass_1 = 1\nmass_2 = 1.1\nmass_3 = 0.9\nmass_4 = 1.2\nmass_5 = 1.05\n"
                           "[invariants]\nk2_1_2 = 1.4\nk2_1_3 = 1.5\nk2_1_4 = 1.7\nk2_1_5 = 1.45\nk2_2_3 = 1.6\n"
                           "k2_2_4 = 1.8\nk2_2_5 = 1.35\nk2_3_4 = 1.3\nk2_3_5 = 1.55\nk2_4_5 = 1.25\n[dimension]\nn = 4\n";
    RunRequest r;
    r.command = Command::oracle;
    r.config_path = path;
    r.output_format = OutputFormat::jsonlines;
    r.mc.samples = 1'000'000;
    r.mc.seed = 20261018;
    std::ostringstream o1, o2, e1, e2;
    const int a = run(r, o1, e1), b = run(r, o2, e2);
    v.detail << "exit codes " << a << "/" << b << ", " << o1.str().size() << " bytes";
    v.require(a == 0 && b == 0, "run failed: " + e1.str());
    v.require(!o1.str().empty() && o1.str() == o2.str(), "outputs differ");
}

}  // namespace

int main() {
    const std::function<void(Verdict&)> criteria[] = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12, c13};
    int failed = 0;
    for (int i = 0; i < 13; ++i) {
        Verdict v;
        const auto t0 = Clock::now();
        try {
            criteria[i](v);
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << " [exception: " << e.what() << "]";
        }
        std::printf("criterion %d: %s (%.1f s) %s\n", i + 1, v.pass ? "PASS" : "FAIL", seconds_since(t0),
                    v.detail.str().c_str());
        std::fflush(stdout);
        failed += !v.pass;
    }
    return failed ? 1 : 0;
}
