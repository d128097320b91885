#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>

#include "mchain/errors.hpp"

namespace mchain {

// Exact arbitrary-precision rational.  The default scalar for everything
// that has to reproduce rational answers bit-exactly.
using Rat = mpq_class;

inline Rat parse_rational(const std::string& text) {
    mpq_class q;
    if (q.set_str(text, 10) != 0) {
        throw ConfigError("not a rational: '" + text + "'");
    }
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rat& q) { return q.get_str(); }

inline Rat make_ratio(long num, long den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// Numeric-mode traits.  Core operations are templated on the scalar; the
// two instantiations are Rat (exact mode) and double (float mode).
template <class T>
struct num_traits;

template <>
struct num_traits<Rat> {
    static constexpr bool exact = true;
    static Rat zero() { return Rat(0); }
    static Rat one() { return Rat(1); }
    static Rat ratio(long p, long q) { return make_ratio(p, q); }
    static double to_double(const Rat& v) { return v.get_d(); }
    static Rat abs(const Rat& v) { return ::abs(v); }
    // Slack added to comparisons that are exact in this mode.
    static Rat slack() { return Rat(0); }
};

template <>
struct num_traits<double> {
    static constexpr bool exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double ratio(long p, long q) { return static_cast<double>(p) / static_cast<double>(q); }
    static double to_double(double v) { return v; }
    static double abs(double v) { return std::fabs(v); }
    static double slack() { return 1e-9; }
};

}  // namespace mchain
