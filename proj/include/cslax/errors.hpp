#ifndef CSLAX_ERRORS_HPP
#define CSLAX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cslax {

// Error taxonomy shared by all modules.  Every throw site states which
// contract was violated; callers (notably the CLI) map these to exit codes.

// Argument outside the documented domain (bad modulus, non-Hermitian input, ...).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation requested at a pole / non-integrable singularity.
struct PoleError : std::runtime_error {
    explicit PoleError(const std::string& msg) : std::runtime_error(msg) {}
};

// An iteration failed to converge within its cap.
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// A structural property the algorithm relies on failed (no bracketing sign
// change, branch monotonicity violated, ...) -- signals a bug upstream.
struct StructureError : std::runtime_error {
    explicit StructureError(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation requested on a branch cut.
struct CutError : std::runtime_error {
    explicit CutError(const std::string& msg) : std::runtime_error(msg) {}
};

// A matrix that must be symmetric positive definite failed its factorization.
struct SpdError : std::runtime_error {
    explicit SpdError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace cslax

#endif
