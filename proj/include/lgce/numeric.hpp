#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace lgce {

// 50 decimal digits; the coefficient extraction is a falling-factorial
// interpolation and loses roughly one bit per order.
using xreal = boost::multiprecision::cpp_bin_float_50;

inline constexpr double inf = std::numeric_limits<double>::infinity();

/// Input outside an operation's documented guard (size caps, order caps, regime).
class guard_error : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Malformed user configuration.
class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline xreal xneg_inf() { return -std::numeric_limits<xreal>::infinity(); }

inline bool is_neg_inf(const xreal& x) { return boost::multiprecision::isinf(x) && x < 0; }

template <typename T>
T log_sum_exp(const std::vector<T>& v) {
    using std::exp;
    using std::log;
    T m = -std::numeric_limits<T>::infinity();
    for (const auto& x : v)
        if (x > m) m = x;
    if (m == -std::numeric_limits<T>::infinity()) return m;
    T s = 0;
    for (const auto& x : v)
        if (x != -std::numeric_limits<T>::infinity()) s += exp(x - m);
    return m + log(s);
}

inline xreal log_factorial(long n) {
    xreal s = 0;
    for (long k = 2; k <= n; ++k) s += log(xreal(k));
    return s;
}

/// log(V^N / N!)
inline xreal log_ideal(long N, long V) { return xreal(N) * log(xreal(V)) - log_factorial(N); }

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Golden-section maximization of a unimodal f on [a, b].
template <typename F>
double golden_max(F&& f, double a, double b, double tol = 1e-12) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        } else {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace lgce
