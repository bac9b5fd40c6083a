#pragma once

#include "backstep/types.hpp"

#include <cmath>

namespace backstep {

using ExtComplex = std::complex<long double>;

// Product kept as sign * exp(log_magnitude) so that long products of O(1)
// factors neither overflow nor underflow. Accumulation runs in long double:
// downstream sums such as the TB=B check cancel several digits, and the
// extra bits keep the rounded double entries correctly rounded in practice.
// For real factors the sign stays exactly +-1.
class LogSignedProduct {
public:
    LogSignedProduct() = default;

    static LogSignedProduct from_value(ExtComplex v) {
        LogSignedProduct p;
        p.multiply(v);
        return p;
    }

    void multiply(ExtComplex f) {
        long double m = std::abs(f);
        if (m == 0.0L) {
            zero_ = true;
            return;
        }
        log_magnitude_ += std::log(m);
        rotate(f / m);
    }

    // Multiplies by (1 + u), keeping accuracy when |u| is small.
    void multiply_one_plus(ExtComplex u) {
        ExtComplex f = 1.0L + u;
        long double m = std::abs(f);
        if (m == 0.0L) {
            zero_ = true;
            return;
        }
        log_magnitude_ += 0.5L * std::log1p(2.0L * u.real() + std::norm(u));
        rotate(f / m);
    }

    LogSignedProduct& operator*=(const LogSignedProduct& o) {
        zero_ = zero_ || o.zero_;
        log_magnitude_ += o.log_magnitude_;
        rotate(o.sign_);
        return *this;
    }

    friend LogSignedProduct operator*(LogSignedProduct a, const LogSignedProduct& b) { return a *= b; }

    double log_magnitude() const { return static_cast<double>(log_magnitude_); }
    Complex sign() const { return Complex(sign_); }
    bool is_zero() const { return zero_; }

    ExtComplex ext_value() const { return zero_ ? ExtComplex(0.0L) : sign_ * std::exp(log_magnitude_); }
    Complex value() const { return Complex(ext_value()); }
    double magnitude() const { return zero_ ? 0.0 : static_cast<double>(std::exp(log_magnitude_)); }

private:
    void rotate(ExtComplex unit) {
        if (unit.imag() == 0.0L) {
            if (unit.real() < 0.0L) sign_ = -sign_;
            return;
        }
        sign_ *= unit;
        // keep the phase on the unit circle over long products
        sign_ /= std::abs(sign_);
    }

    long double log_magnitude_ = 0.0L;
    ExtComplex sign_{1.0L, 0.0L};
    bool zero_ = false;
};

}  // namespace backstep
