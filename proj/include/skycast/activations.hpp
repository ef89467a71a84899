#pragma once

#include <algorithm>
#include <cmath>

namespace skycast {

// Logistic sigmoid 1/(1 + exp(-alpha*y)). The exponent argument is clamped to
// +-500 where saturation is already exact in double precision, so the result
// is always finite and inside (0, 1).
inline double sigmoid(double y, double alpha = 1.0) {
    double z = std::clamp(alpha * y, -500.0, 500.0);
    return 1.0 / (1.0 + std::exp(-z));
}

inline double tanh_act(double y) { return std::tanh(y); }

// Derivative helpers taking the already-computed activation value.
inline double sigmoid_deriv(double s) { return s * (1.0 - s); }
inline double tanh_deriv(double t) { return 1.0 - t * t; }

} // namespace skycast
