#pragma once

#include "gbl/space.hpp"
#include "gbl/types.hpp"

namespace gbl {

/// A basis e_1..e_n of R^n (matrix columns) together with its biorthogonal
/// functionals e*_1..e*_n (matrix rows), satisfying duals * vectors = I
/// within kBiorthTol.
class Basis {
public:
    /// Builds the dual system by inversion. Throws InstanceError if the
    /// column matrix is singular or its condition number exceeds cond_bound.
    static Basis make(const Mat& columns, double cond_bound = kDefaultCondBound);

    static Basis canonical(int n);

    int dim() const { return static_cast<int>(vectors_.cols()); }
    const Mat& vectors() const { return vectors_; }  // columns e_i
    const Mat& duals() const { return duals_; }      // rows e*_i

    /// e_i as a vector.
    Vec element(int i) const { return vectors_.col(i); }

    bool is_canonical(double tol = 1e-12) const;

    /// (e*_1(x), ..., e*_n(x)).
    Vec dual_coefficients(const Vec& x) const;

    /// sum_i c_i e_i.
    Vec combine(const Vec& coeffs) const;

private:
    Basis(Mat vectors, Mat duals) : vectors_(std::move(vectors)), duals_(std::move(duals)) {}
    Mat vectors_;
    Mat duals_;
};

/// Convenience wrappers matching the module operation names.
Basis make_basis(const Mat& columns, double cond_bound = kDefaultCondBound);
Vec dual_coefficients(const Basis& basis, const Vec& x);

/// ||e_i|| for every basis element; throws InstanceError if any is zero
/// (the basis would not be semi-normalized) or non-finite.
std::vector<double> element_norms(const NormedSpace& space, const Basis& basis);

}  // namespace gbl
