#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "mchain/adversary.hpp"
#include "mchain/generators.hpp"

namespace mchain {

// Expected hitting time of a rotating interval target on a cycle chain:
// A_t = [phase + floor(t * speed_num / speed_den), +width) mod n.  The
// masked recursion runs until the survival mass drops below `tol` (or the
// cap), then closes with the static hitting time of the current interval,
// so the result is an exact expectation of an eventually-constant sequence.
template <class T>
T rotating_interval_hitting(const MarkovChain<T>& chain, std::size_t start, std::size_t width,
                            long speed_num, long speed_den, std::size_t phase, double tol = 1e-9,
                            long cap = 2'000'000) {
    const std::size_t n = chain.n();
    auto interval_start = [&](long t) {
        long shift = (t * speed_num) / speed_den;
        return static_cast<std::size_t>(((static_cast<long>(phase) + shift) % static_cast<long>(n) +
                                         static_cast<long>(n)) %
                                        static_cast<long>(n));
    };
    auto in_interval = [&](std::size_t y, std::size_t s0) {
        return (y + n - s0) % n < width;
    };

    std::vector<T> w(n, num_traits<T>::zero());
    w[start] = num_traits<T>::one();
    T acc = num_traits<T>::zero();
    long t = 0;
    while (true) {
        std::size_t s0 = interval_start(t);
        T mass = num_traits<T>::zero();
        for (std::size_t y = 0; y < n; ++y) {
            if (in_interval(y, s0)) w[y] = num_traits<T>::zero();
            mass += w[y];
        }
        if (num_traits<T>::to_double(mass) < tol || t >= cap) {
            // Freeze the target here: remaining expectation is the static
            // hitting time of the current interval, weighted by survivors.
            std::vector<T> h = static_hitting(chain, StateSet::interval(n, s0, width));
            for (std::size_t y = 0; y < n; ++y) acc += w[y] * h[y];
            return acc;
        }
        acc += mass;
        std::vector<T> next(n, num_traits<T>::zero());
        for (std::size_t z = 0; z < n; ++z) {
            if (w[z] == num_traits<T>::zero()) continue;
            for (std::size_t y = 0; y < n; ++y) {
                const T& p = chain.prob(z, y);
                if (p == num_traits<T>::zero()) continue;
                next[y] += w[z] * p;
            }
        }
        w.swap(next);
        ++t;
    }
}

struct SeparationRow {
    std::size_t n = 0;
    long tmix_lazified = 0;
    double t_h = 0.0;
    double rotating = 0.0;
    double upper_bound = 0.0;  // Theorem 1 tripwire for the rotating sequence
};

struct SeparationReport {
    std::vector<SeparationRow> rows;
    // Per-doubling growth ratios and the bands they must land in.
    std::vector<double> tmix_ratios, t_h_ratios, rotating_ratios;
    bool ratios_ok = false;
};

// Emits t_mix(lazified), t_H(alpha) and a rotating-target expectation for a
// biased cycle across doubling sizes, and checks the growth-ratio bands
// (diffusive ~4x, linear ~2x, diffusive ~4x per doubling).
inline SeparationReport separation_demo(const std::vector<std::size_t>& n_values, double bias,
                                        double alpha = 0.25) {
    SeparationReport report;
    for (std::size_t n : n_values) {
        MarkovChain<double> chain = biased_cycle<double>(n, bias);
        MarkovChain<double> lazy = lazify(chain);
        SeparationRow row;
        row.n = n;
        row.tmix_lazified = t_mix(lazy, 0.25, static_cast<long>(100 * n * n + 1000));
        row.t_h = t_H(chain, alpha, SetFamily::Intervals).value;

        std::size_t width = static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(n)));
        width = std::clamp<std::size_t>(width, 1, n);
        // Drift of the biased walk is 2*bias - 1; the target rotates at the
        // same speed (in halves per step), starting opposite the walker.
        long speed_halves = std::lround((2.0 * bias - 1.0) * 2.0);
        row.rotating = rotating_interval_hitting(chain, 0, width, speed_halves, 2, n / 2);
        // The non-lazy cycle is periodic for even n, so its t_mix does not
        // exist; the bound is evaluated on the lazified chain instead.
        row.upper_bound = theorem1_upper_bound(lazy, alpha, static_cast<long>(100 * n * n + 1000));
        check_tripwire(row.rotating, row.upper_bound, "separation_demo rotating target");
        report.rows.push_back(row);
    }
    bool ok = true;
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        double rm = static_cast<double>(report.rows[i].tmix_lazified) /
                    static_cast<double>(report.rows[i - 1].tmix_lazified);
        double rh = report.rows[i].t_h / report.rows[i - 1].t_h;
        double rr = report.rows[i].rotating / report.rows[i - 1].rotating;
        report.tmix_ratios.push_back(rm);
        report.t_h_ratios.push_back(rh);
        report.rotating_ratios.push_back(rr);
        ok = ok && rm >= 2.5 && rm <= 5.5 && rh >= 1.4 && rh <= 2.8 && rr >= 2.5 && rr <= 5.5;
    }
    report.ratios_ok = ok;
    return report;
}

}  // namespace mchain
