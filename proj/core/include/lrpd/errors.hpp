#pragma once

#include <stdexcept>
#include <string>

namespace lrpd {

/// Malformed input data (CSV/JSON files, dimension mismatches in loaded data).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The dense symmetric eigensolver did not converge.
class EigensolverError : public std::runtime_error {
public:
    EigensolverError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    /// ||A - V diag(values) V^T||_F of whatever the solver returned.
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// An iterative solver left its domain of validity (e.g. the model covariance
/// stopped being positive definite during gradient descent).
class SolverDiverged : public std::runtime_error {
public:
    SolverDiverged(const std::string& what, int iteration)
        : std::runtime_error(what), iteration_(iteration) {}
    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

/// MM backtracking exhausted its budget without certifying a step.
class BacktrackingFailure : public std::runtime_error {
public:
    BacktrackingFailure(const std::string& what, double lipschitz)
        : std::runtime_error(what), lipschitz_(lipschitz) {}
    double last_lipschitz() const noexcept { return lipschitz_; }

private:
    double lipschitz_;
};

}  // namespace lrpd
