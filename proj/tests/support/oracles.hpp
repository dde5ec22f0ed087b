// Test-side oracles, independent of the library implementations they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace oracles {

// Per-vehicle FIFO bottleneck simulation. Vehicles arrive uniformly
// spread within their step (midpoint convention); the bottleneck allows
// one departure per 1/C(t) of elapsed capacity-time. Returns the total
// waiting time in vehicle-hours accumulated inside the horizon.
inline double fifo_queue_delay(const std::vector<long long>& arrivals_per_step,
                               const std::vector<double>& capacity_pcu_h, double td_h) {
    if (arrivals_per_step.size() != capacity_pcu_h.size())
        throw std::invalid_argument("oracle: step count mismatch");
    const size_t n_steps = arrivals_per_step.size();
    const double horizon_h = static_cast<double>(n_steps) * td_h;

    // Cumulative capacity S(t), piecewise linear.
    std::vector<double> cum(n_steps + 1, 0.0);
    for (size_t i = 0; i < n_steps; ++i) cum[i + 1] = cum[i] + capacity_pcu_h[i] * td_h;

    auto cap_at = [&](double t) {
        auto i = static_cast<size_t>(t / td_h);
        if (i >= n_steps) i = n_steps - 1;
        return capacity_pcu_h[i];
    };
    auto s_of_t = [&](double t) {
        auto i = static_cast<size_t>(t / td_h);
        if (i >= n_steps) return cum[n_steps] + (t - horizon_h) * capacity_pcu_h[n_steps - 1];
        return cum[i] + (t - static_cast<double>(i) * td_h) * capacity_pcu_h[i];
    };
    auto t_of_s = [&](double s) {
        if (s >= cum[n_steps]) {
            // Past the horizon: continue at the last step's rate.
            return horizon_h + (s - cum[n_steps]) / capacity_pcu_h[n_steps - 1];
        }
        size_t lo = 0, hi = n_steps;
        while (hi - lo > 1) {
            const size_t mid = (lo + hi) / 2;
            if (cum[mid] <= s) lo = mid;
            else hi = mid;
        }
        double t = static_cast<double>(lo) * td_h;
        if (capacity_pcu_h[lo] > 0) t += (s - cum[lo]) / capacity_pcu_h[lo];
        return t;
    };

    double total_delay_h = 0.0;
    double prev_dep = -1.0;
    bool first = true;
    for (size_t i = 0; i < n_steps; ++i) {
        const long long n = arrivals_per_step[i];
        for (long long k = 0; k < n; ++k) {
            const double arr =
                (static_cast<double>(i) + (static_cast<double>(k) + 0.5) / static_cast<double>(n)) *
                td_h;
            double dep;
            if (first) {
                dep = arr;
                first = false;
            } else {
                dep = std::max(arr, t_of_s(s_of_t(prev_dep) + 1.0));
            }
            prev_dep = dep;
            total_delay_h += std::max(0.0, std::min(dep, horizon_h) - arr);
        }
    }
    return total_delay_h;
}

// Density of N(mu, sigma) at x.
inline double normal_density(double x, double mu, double sigma) {
    const double z = (x - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * 3.14159265358979323846));
}

// Dense scan between the means for the point where the two normal
// densities cross, refined by bisection on the density difference.
inline double scan_gaussian_boundary(double m1, double s1, double m2, double s2) {
    auto diff = [&](double x) { return normal_density(x, m1, s1) - normal_density(x, m2, s2); };
    const int grid = 200000;
    double prev_x = m1;
    double prev_d = diff(prev_x);
    for (int i = 1; i <= grid; ++i) {
        const double x = m1 + (m2 - m1) * static_cast<double>(i) / grid;
        const double d = diff(x);
        if (prev_d > 0 && d <= 0) {
            double lo = prev_x, hi = x;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (diff(mid) > 0) lo = mid;
                else hi = mid;
            }
            return 0.5 * (lo + hi);
        }
        prev_x = x;
        prev_d = d;
    }
    throw std::runtime_error("scan oracle: no density crossing between the means");
}

// Time lost to a speed change, from kinematics: time to change speed at
// rate a minus the time cruising at v_high over the same distance.
// Everything in SI; result in seconds.
inline double speed_change_delay_s(double v_high_ms, double v_low_ms, double a_ms2) {
    const double t_change = (v_high_ms - v_low_ms) / a_ms2;
    const double dist = 0.5 * (v_high_ms + v_low_ms) * t_change;
    return t_change - dist / v_high_ms;
}

} // namespace oracles
