#pragma once

#include <stdexcept>
#include <string>

namespace dynot {

// Base of every error the library raises. Callers that only care about
// "something in dynot failed" can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidGrid : public Error { using Error::Error; };
class ShapeMismatch : public Error { using Error::Error; };
class MassMismatch : public Error { using Error::Error; };
class NonConvergence : public Error { using Error::Error; };
class InvalidParams : public Error { using Error::Error; };
class ZeroMass : public Error { using Error::Error; };
class DimensionMismatch : public Error { using Error::Error; };
class EmptyHue : public Error { using Error::Error; };

// File-level failures. The CLI maps these to exit code 2.
class IoError : public Error { using Error::Error; };
class UnsupportedFormat : public IoError { using IoError::IoError; };
class BadMagic : public IoError { using IoError::IoError; };
class SizeMismatch : public IoError { using IoError::IoError; };

}  // namespace dynot
