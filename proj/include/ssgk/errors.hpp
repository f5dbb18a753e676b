#pragma once

#include <stdexcept>
#include <string>

namespace ssgk {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// gf2_linalg
struct SingularMatrixError : Error {
    SingularMatrixError() : Error("matrix is singular") {}
};
struct NotAnnihilatedError : Error {
    NotAnnihilatedError() : Error("order bound does not annihilate the matrix") {}
};

// field_params
struct UnsupportedDegreeError : Error {
    explicit UnsupportedDegreeError(unsigned m)
        : Error("degree m=" + std::to_string(m) + " is not in the parameter table") {}
};
struct OrderVerificationError : Error {
    using Error::Error;
};

// handshake
struct NotCoprimeError : Error {
    NotCoprimeError() : Error("arguments are not coprime") {}
};
struct RetryExhaustedError : Error {
    using Error::Error;
};
struct MalformedMessageError : Error {
    using Error::Error;
};
struct KeyMismatchError : Error {
    KeyMismatchError() : Error("role keys disagree after a complete run") {}
};

// analysis
struct DlogFailedError : Error {
    using Error::Error;
};

// wire / transport
struct DecodeError : Error {
    using Error::Error;
};
struct TruncatedInputError : DecodeError {
    TruncatedInputError() : DecodeError("input ends before the declared content") {}
};
struct NonzeroPadBitsError : DecodeError {
    NonzeroPadBitsError() : DecodeError("nonzero bits in row padding") {}
};
struct BadFrameError : DecodeError {
    using DecodeError::DecodeError;
};
struct TransportError : Error {
    using Error::Error;
};
struct TimeoutError : TransportError {
    TimeoutError() : TransportError("timed out waiting for peer data") {}
};

}  // namespace ssgk
