#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace oloop {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr int kMaxDim = 9;

enum class ErrorKind {
    NonPositiveMass,
    SingularMatrix,
    IndexOutOfRange,
    NonConvergence,
    TailDominates,
    NonPositiveDiagonal,
    OutOfRange,
    DegenerateConditioning,
    DivergentIntegral,
    AssemblyLimit,
    InconsistentMomenta,
    NotPositiveDefinite,
    Unsupported,
    ParseError,
    ValidationError,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

enum class Method { closed_form, quadrature, contour, monte_carlo };

const char* method_name(Method m);

// Normalization is always that of the Feynman-parameter definition
// J = (-1)^nu Gamma(nu - n/2) / prod Gamma(nu_i) * int_simplex prod u^(nu_i-1) (u.Sigma.u)^(n/2-nu).
struct IntegralValue {
    cplx value{};
    double abs_error = 0.0;
    Method method = Method::closed_form;
    bool converged = true;
};

}  // namespace oloop
