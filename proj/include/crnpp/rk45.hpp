#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace crnpp {

struct SolverConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = 0.0;          // 0 = no cap
    double overflow_bound = 1e12;   // divergence detector
};

// Thrown on step-size underflow or concentration overflow; carries the state
// at failure so callers can attribute the dominant flux.
struct SimulationError : std::runtime_error {
    double t;
    std::vector<double> state;

    SimulationError(const std::string& msg, double at, std::vector<double> y)
        : std::runtime_error(msg), t(at), state(std::move(y)) {}
};

// Dormand-Prince 5(4) embedded pair with FSAL and standard PI-free step
// control. `rhs(y, dydt)`, `post_step(y)` fixes up the accepted state
// (nonnegativity clamps), `observe(t, y)` records it.
template <class Rhs, class PostStep, class Observe>
void integrate_rk45(Rhs&& rhs, std::vector<double>& y, double t0, double t1,
                    const SolverConfig& cfg, PostStep&& post_step, Observe&& observe) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - b*: error estimator weights
    static constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695,
                            e4 = b4 - 393.0 / 640, e5 = b5 + 92097.0 / 339200,
                            e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;
    // stage times are not needed: mass-action systems are autonomous

    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    std::vector<double> ytmp(n), ynew(n);

    double t = t0;
    double span = t1 - t0;
    if (span <= 0.0) return;

    double h = span * 0.01;
    if (cfg.max_step > 0.0) h = std::min(h, cfg.max_step);
    h = std::min(h, span);

    observe(t, y);
    rhs(y.data(), k1.data());

    const double min_h = std::max(span, 1.0) * 1e-14;

    while (t < t1) {
        if (t + h > t1) h = t1 - t;

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(ytmp.data(), k2.data());
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(ytmp.data(), k3.data());
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(ytmp.data(), k4.data());
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(ytmp.data(), k5.data());
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        rhs(ytmp.data(), k6.data());
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(ynew.data(), k7.data());

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                             e7 * k7[i]);
            double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
            double r = ei / scale;
            err += r * r;
        }
        err = std::sqrt(err / static_cast<double>(n));

        if (!std::isfinite(err)) {
            // A stage blew up; shrink hard and retry.
            h *= 0.1;
            if (h < min_h)
                throw SimulationError("solver failure: non-finite derivative", t, y);
            continue;
        }

        if (err <= 1.0) {
            t += h;
            y.swap(ynew);
            bool clamped = post_step(y);
            for (std::size_t i = 0; i < n; ++i) {
                if (std::fabs(y[i]) > cfg.overflow_bound)
                    throw SimulationError("concentration overflow (diverging system)", t, y);
            }
            observe(t, y);
            if (clamped)
                rhs(y.data(), k1.data());  // state was adjusted, k7 is stale
            else
                k1.swap(k7);
        }

        double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        factor = std::clamp(factor, 0.2, 5.0);
        h *= factor;
        if (cfg.max_step > 0.0) h = std::min(h, cfg.max_step);
        if (h < min_h)
            throw SimulationError("step size underflow (system too stiff)", t, y);
    }
}

}  // namespace crnpp
