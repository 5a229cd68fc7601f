#pragma once

#include <memory>

#include "gbl/norm_spec.hpp"
#include "gbl/types.hpp"

namespace gbl {

/// A finite-dimensional normed space (R^n, ||.||) with an evaluable norm.
///
/// Construction validates the spec and precomputes what the evaluator needs
/// (dual system of the projection basis for derived norms). Instances are
/// immutable values; evaluation is pure and safe for concurrent use.
class NormedSpace {
public:
    NormedSpace(int dim, NormSpec spec);

    int dim() const { return dim_; }
    const NormSpec& spec() const { return spec_; }

    /// Norm of x; checks dimension and finiteness (InstanceError on failure).
    double norm(const Vec& x) const;

    /// Norm of x without input checks; hot path for the estimators.
    double norm_unchecked(const Vec& x) const;

    bool is_quadratic() const { return spec_.is<QuadraticNorm>(); }
    bool is_polyhedral() const { return spec_.is<PolyhedralNorm>(); }
    bool is_derived() const { return spec_.is<SuppressionRenorm>(); }

private:
    int dim_;
    NormSpec spec_;
    // Derived-norm precomputation: dual rows of the projection basis and the
    // base space evaluator.
    Mat derived_duals_;
    std::shared_ptr<const NormedSpace> base_space_;
};

/// Free-function form of norm evaluation.
double norm(const NormedSpace& space, const Vec& x);

}  // namespace gbl
