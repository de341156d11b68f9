#pragma once

#include <stdexcept>
#include <string>

namespace chsh {

// Base class for every failure this library reports. Messages name the
// violated bound and its measured magnitude where one exists.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotHermitianError : Error {
    double deviation;
    explicit NotHermitianError(double dev, double tol)
        : Error("matrix is not Hermitian: max |a_ij - conj(a_ji)| = " +
                std::to_string(dev) + " exceeds tolerance " + std::to_string(tol)),
          deviation(dev) {}
};

struct TraceNotOneError : Error {
    double deviation;
    explicit TraceNotOneError(double dev, double tol)
        : Error("trace differs from 1 by " + std::to_string(dev) +
                ", tolerance " + std::to_string(tol)),
          deviation(dev) {}
};

struct NotPositiveError : Error {
    double min_eigenvalue;
    explicit NotPositiveError(double lambda_min, double tol)
        : Error("matrix is not positive semidefinite: smallest eigenvalue " +
                std::to_string(lambda_min) + " is below -" + std::to_string(tol)),
          min_eigenvalue(lambda_min) {}
};

struct ZeroVectorError : Error {
    ZeroVectorError() : Error("amplitude vector has zero norm") {}
};

struct NotHermitianOperatorError : Error {
    double deviation;
    explicit NotHermitianOperatorError(double dev, double tol)
        : Error("operator is not Hermitian: max |a_ij - conj(a_ji)| = " +
                std::to_string(dev) + " exceeds tolerance " + std::to_string(tol)),
          deviation(dev) {}
};

struct InvalidParameterError : Error {
    using Error::Error;
};

struct FactorizableStateError : Error {
    FactorizableStateError()
        : Error("k1*k2 = 0: the closed-form optimal settings are undefined "
                "for factorizable states") {}
};

struct EmptyRangeError : Error {
    using Error::Error;
};

struct ResolutionTooHighError : Error {
    explicit ResolutionTooHighError(long long evals)
        : Error("grid scan would need " + std::to_string(evals) +
                " evaluations, limit is 1e9") {}
};

struct DegenerateStateError : Error {
    DegenerateStateError()
        : Error("geometric identity is undefined for F_max <= 1e-12") {}
};

}  // namespace chsh
