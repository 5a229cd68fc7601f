#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "gbl/types.hpp"

namespace gbl {

struct NormSpec;

/// lp norm, p in [1, inf]; p = infinity() means the max norm.
struct LpNorm {
    double p = 2.0;
};

/// Weighted lp: (sum_i w_i |x_i|^p)^(1/p), all w_i > 0; p = inf gives max_i w_i |x_i|.
struct WeightedLpNorm {
    double p = 2.0;
    Vec weights;
};

/// Quadratic norm sqrt(x' G x) for a symmetric positive definite G.
struct QuadraticNorm {
    Mat gram;
};

/// Polyhedral norm max_k |<f_k, x>| over m functional rows spanning R^n.
struct PolyhedralNorm {
    Mat rows;  // m x n
};

/// Derived norm |||x||| = max over nonempty A of ||P_A x|| where P_A projects
/// onto the span of the given basis columns; produced by the suppression
/// renorming. The base may not itself be a derived norm.
struct SuppressionRenorm {
    std::shared_ptr<const NormSpec> base;
    Mat columns;  // projection basis, n x n
};

struct NormSpec {
    std::variant<LpNorm, WeightedLpNorm, QuadraticNorm, PolyhedralNorm, SuppressionRenorm> v;

    template <class T>
    bool is() const { return std::holds_alternative<T>(v); }
    template <class T>
    const T& as() const { return std::get<T>(v); }

    const char* type_name() const;
};

inline NormSpec lp_norm(double p) { return NormSpec{LpNorm{p}}; }
inline NormSpec weighted_lp_norm(double p, Vec w) { return NormSpec{WeightedLpNorm{p, std::move(w)}}; }
inline NormSpec quadratic_norm(Mat gram) { return NormSpec{QuadraticNorm{std::move(gram)}}; }
inline NormSpec polyhedral_norm(Mat rows) { return NormSpec{PolyhedralNorm{std::move(rows)}}; }

/// Outcome of validate_norm_spec: empty failure list means the spec is accepted.
struct ValidationReport {
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
    std::string joined() const;
};

/// Checks the type invariants of a norm specification against a dimension.
/// Never throws; every violated check contributes one entry to the report.
ValidationReport validate_norm_spec(const NormSpec& spec, int dim);

}  // namespace gbl
