#include "orthantloop/quadrature.hpp"

#include <cmath>

namespace oloop {

IntegralValue integrate_01(const std::function<cplx(double)>& f, const QuadratureSettings& s) {
    auto r = integrate_unit<cplx>(f, s);
    return {r.value, r.error, Method::quadrature, r.converged};
}

IntegralValue integrate_0inf(const std::function<cplx(double)>& f, const QuadratureSettings& s) {
    auto r = integrate_halfline<cplx>(f, s);
    return {r.value, r.error, Method::quadrature, r.converged};
}

namespace {

struct Segment {
    cplx value;
    double error;
    bool converged;
};

// int_{t0}^{t1} g(t) dt, split into panels short enough for the adaptive rule
// to follow oscillations.
template <class G>
Segment integrate_segment(G& g, double t0, double t1, double panel, const QuadratureSettings& s) {
    const int panels = std::max(1, static_cast<int>(std::ceil((t1 - t0) / panel)));
    Segment out{0.0, 0.0, true};
    for (int k = 0; k < panels; ++k) {
        const double a = t0 + (t1 - t0) * k / panels;
        const double b = t0 + (t1 - t0) * (k + 1) / panels;
        auto r = adaptive<cplx>(g, a, b, s);
        out.value += r.value;
        out.error += r.error;
        out.converged = out.converged && r.converged;
    }
    return out;
}

}  // namespace

ContourResult integrate_contour_detailed(const std::function<cplx(cplx)>& f, const QuadratureSettings& s,
                                         bool conjugate_symmetric) {
    const double c = s.contour_abscissa_c;
    if (!(c > 0.0)) throw Error(ErrorKind::OutOfRange, "contour abscissa must be positive");
    double T = s.contour_halfheight_T > 0.0 ? s.contour_halfheight_T : 16.0 * c;
    const double panel = 16.0 * T;

    // t >= 0 half of the line; the other half is folded in
    auto g = [&](double t) -> cplx {
        const cplx up = f(cplx(c, t));
        if (conjugate_symmetric) return 2.0 * up.real();
        return up + f(cplx(c, -t));
    };

    QuadratureSettings seg_s = s;
    Segment first = integrate_segment(g, 0.0, T, panel, seg_s);
    cplx total = first.value;
    double err = first.error;
    bool converged = first.converged;

    cplx last = 0.0, prev = 0.0;
    double last_ratio = -1.0;
    double tail = INFINITY;
    bool done = false;
    constexpr int max_doublings = 48;
    long budget = 4'000'000;  // integrand evaluations spent on doubling
    for (int it = 0; it < max_doublings && !done; ++it) {
        seg_s.abs_tol = std::max(s.abs_tol, 0.05 * s.rel_tol * std::abs(total));

        // A clean power-law decay lets the remaining tail be mapped onto (0, 1].
        if (it >= 2 && std::abs(prev) > 0.0) {
            const cplx r = last / prev;
            const double rr = std::abs(r);
            const bool aligned = r.real() > 0.0 && std::abs(r.imag()) < 0.1 * r.real();
            const bool steady = last_ratio > 0.0 && std::abs(rr - last_ratio) < 0.15 * rr;
            if (aligned && steady && rr < 0.95) {
                QuadratureSettings ts = seg_s;
                ts.max_subdivisions = 200;
                const double T0 = T;
                auto h = [&](double x) -> cplx { return g(T0 / x) * (T0 / (x * x)); };
                auto r_tail = adaptive<cplx>(h, 0.0, 1.0, ts);
                const double target = s.rel_tol * std::abs(total + r_tail.value);
                const cplx geometric = last * (r / (1.0 - r));
                if (r_tail.converged && r_tail.error <= 0.5 * std::max(target, s.abs_tol) &&
                    std::abs(r_tail.value - geometric) <= 0.5 * std::abs(geometric) + s.abs_tol) {
                    total += r_tail.value;
                    err += r_tail.error;
                    tail = r_tail.error;
                    done = true;
                    break;
                }
            }
        }

        Segment seg = integrate_segment(g, T, 2.0 * T, panel, seg_s);
        budget -= 21L * std::max(1, static_cast<int>(std::ceil(T / panel)));
        total += seg.value;
        err += seg.error;
        converged = converged && seg.converged;
        T *= 2.0;
        if (it >= 1 && std::abs(last) > 0.0) last_ratio = std::abs(seg.value / last);
        prev = last;
        last = seg.value;
        if (it >= 1) {
            tail = 2.0 * std::max(std::abs(last), std::abs(prev));
            if (tail <= std::max(s.abs_tol, s.rel_tol * std::abs(total))) {
                err += tail;
                done = true;
            }
        }
        if (budget < 0) break;
    }

    ContourResult out;
    const double scale = 1.0 / (2.0 * kPi);
    out.value = {total * scale, err * scale, Method::contour, converged && done};
    out.tail_estimate = tail * scale;
    out.final_halfheight = T;
    if (!done) {
        if (!(tail <= 10.0 * s.rel_tol * std::abs(total)))
            throw Error(ErrorKind::TailDominates, "contour tail estimate exceeds 10 rel_tol |value|");
        out.value.abs_error += out.tail_estimate;
    }
    return out;
}

IntegralValue integrate_contour(const std::function<cplx(cplx)>& f, const QuadratureSettings& s,
                                bool conjugate_symmetric) {
    return integrate_contour_detailed(f, s, conjugate_symmetric).value;
}

}  // namespace oloop
