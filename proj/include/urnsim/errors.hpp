#ifndef URNSIM_ERRORS_HPP
#define URNSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace urnsim {

// Invalid user input (configs, parameters). Carries a field path when the
// error came from a config document.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
    ValidationError(const std::string& field, const std::string& msg)
        : std::invalid_argument(field + ": " + msg), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// A theorem hypothesis is violated by the supplied configuration
// (e.g. a CLT experiment with lim E(B_n) = 0).
class HypothesisViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Internally inconsistent data, e.g. a path record whose replay does not
// reproduce the stored series.
class IntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Exact enumeration would exceed its state-space guard.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace urnsim

#endif  // URNSIM_ERRORS_HPP
