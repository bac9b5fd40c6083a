#pragma once

#include <stdexcept>
#include <string>

namespace backstep {

// Bad input or configuration. The CLI maps it to exit code 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A mathematical guard tripped (resonance, vanishing gain, divergence...).
// The CLI maps it to exit code 3.
class GuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ResonanceError : public GuardError {
public:
    ResonanceError(const std::string& what, int i, int j) : GuardError(what), i_(i), j_(j) {}
    int i() const { return i_; }
    int j() const { return j_; }

private:
    int i_;
    int j_;
};

class GainFloorError : public GuardError {
public:
    GainFloorError(const std::string& what, int n) : GuardError(what), n_(n) {}
    int index() const { return n_; }

private:
    int n_;
};

class DivergenceError : public GuardError {
public:
    DivergenceError(const std::string& what, int stage) : GuardError(what), stage_(stage) {}
    int stage() const { return stage_; }

private:
    int stage_;
};

// No candidate damping value cleared its certified floor. This cannot happen
// if the gap constants are right, so it is reported loudly.
class CertificateContradiction : public GuardError {
public:
    using GuardError::GuardError;
};

class SingularMatrixError : public GuardError {
public:
    using GuardError::GuardError;
};

class EnumerationOverflow : public UsageError {
public:
    using UsageError::UsageError;
};

}  // namespace backstep
