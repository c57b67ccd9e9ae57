#pragma once

#include <stdexcept>
#include <string>

namespace susy {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// expalg
class ContextMismatch : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };
class DivergentIntegral : public Error { public: using Error::Error; };
class ClosureError : public Error { public: using Error::Error; };

// parameter records and solvers
class InvalidParameters : public Error { public: using Error::Error; };
class NoBoundStates : public Error { public: using Error::Error; };
class DegenerateDenominator : public Error { public: using Error::Error; };
class SingularXi : public Error { public: using Error::Error; };
class NegativeRadicand : public Error { public: using Error::Error; };

// oracle
class GridTooCoarse : public Error { public: using Error::Error; };
class TailNotDecayed : public Error { public: using Error::Error; };

} // namespace susy
