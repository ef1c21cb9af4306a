#ifndef FLUXGRAPH_TYPES_HPP
#define FLUXGRAPH_TYPES_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace fluxgraph {

// Flux J and gradient D are real N-by-d matrices (rows = components,
// columns = spatial directions).  Scalar problems use 1x1 matrices.
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Flattening convention, fixed globally: row-major over (component, direction),
// i.e. entry (nu, i) of an N-by-d matrix maps to flat index nu*d + i.
inline Vec flatten(const Mat& m) {
    Vec out(m.size());
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            out[r * m.cols() + c] = m(r, c);
    return out;
}

inline Mat unflatten(const Vec& v, Eigen::Index rows, Eigen::Index cols) {
    Mat out(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            out(r, c) = v[r * cols + c];
    return out;
}

// Frobenius pairing J:D.
inline double ddot(const Mat& a, const Mat& b) { return (a.array() * b.array()).sum(); }

struct TensorPair {
    Mat J;
    Mat D;

    TensorPair() = default;
    TensorPair(Mat j, Mat d) : J(std::move(j)), D(std::move(d)) {
        if (J.rows() != D.rows() || J.cols() != D.cols() || J.rows() < 1 || J.cols() < 1)
            throw std::invalid_argument("TensorPair: J and D must share a shape NxD with N,d >= 1");
    }
};

// ---------------------------------------------------------------------------
// Error taxonomy.  The CLI maps these onto exit codes.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid model/scheme parameters (p <= 1, sigma <= 0, weights off, ...).
struct ParameterError : Error {
    using Error::Error;
};

// Shape mismatch between a model and its operands.
struct DimensionError : Error {
    using Error::Error;
};

// Bisection bracket does not change sign.
struct BracketError : Error {
    using Error::Error;
};

// Newton did not converge even after the continuation fallback.
struct SelectionError : Error {
    double last_residual;
    SelectionError(const std::string& what, double residual)
        : Error(what), last_residual(residual) {}
};

// A nonlinear time step failed.
struct StepError : Error {
    int step_index;
    double residual;
    StepError(const std::string& what, int step, double res)
        : Error(what), step_index(step), residual(res) {}
};

// A spec-level property assertion failed (carries a textual witness).
struct PropertyError : Error {
    using Error::Error;
};

// Configuration file / CLI input problems.
struct ConfigError : Error {
    int line = 0;
    explicit ConfigError(const std::string& what, int line_number = 0)
        : Error(what), line(line_number) {}
};

// Pure-Neumann data incompatible with solvability.
struct CompatibilityError : Error {
    using Error::Error;
};

}  // namespace fluxgraph

#endif
