#pragma once

#include <stdexcept>
#include <string>

namespace skycast {

// Malformed, out-of-range, or insufficient input data. The CLI maps this to
// exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Iterative training produced a non-finite loss. The CLI maps this to exit
// code 3.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& msg, long long epoch)
        : std::runtime_error(msg + " at epoch " + std::to_string(epoch)), epoch_(epoch) {}
    long long epoch() const { return epoch_; }

private:
    long long epoch_;
};

} // namespace skycast
