#pragma once

#include <stdexcept>
#include <string>

namespace ifsc {

// Coarse failure classes, mapped to distinct process exit codes by the CLI.
enum class ErrorClass {
    Validation = 2,      // bad inputs / configuration
    Budget = 3,          // enumeration or trial budget exhausted
    Numerical = 4,       // numerical preconditions violated
};

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
    ErrorClass error_class() const { return cls_; }
    int exit_code() const { return static_cast<int>(cls_); }

private:
    ErrorClass cls_;
};

struct AsymmetricInput : Error {
    explicit AsymmetricInput(const std::string& what) : Error(ErrorClass::Numerical, what) {}
};

struct NotPositiveDefinite : Error {
    explicit NotPositiveDefinite(const std::string& what) : Error(ErrorClass::Numerical, what) {}
};

struct SingularBasis : Error {
    explicit SingularBasis(const std::string& what) : Error(ErrorClass::Numerical, what) {}
};

struct SingularIntegerMatrix : Error {
    explicit SingularIntegerMatrix(const std::string& what) : Error(ErrorClass::Validation, what) {}
};

struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& what) : Error(ErrorClass::Budget, what) {}
};

struct OutOfRegime : Error {
    explicit OutOfRegime(const std::string& what) : Error(ErrorClass::Validation, what) {}
};

struct DegenerateGrid : Error {
    explicit DegenerateGrid(const std::string& what) : Error(ErrorClass::Validation, what) {}
};

struct UnsupportedDimension : Error {
    explicit UnsupportedDimension(const std::string& what) : Error(ErrorClass::Validation, what) {}
};

struct NonUnitaryPrecoder : Error {
    explicit NonUnitaryPrecoder(const std::string& what) : Error(ErrorClass::Validation, what) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(ErrorClass::Validation, what) {}
};

}  // namespace ifsc
