#include "gbl/basis.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "gbl/errors.hpp"

namespace gbl {

Basis Basis::make(const Mat& columns, double cond_bound) {
    if (columns.rows() != columns.cols() || columns.rows() < 1) {
        throw InstanceError("basis: columns must form a square matrix");
    }
    if (!columns.allFinite()) {
        throw InstanceError("basis: column entries must be finite");
    }
    const int n = static_cast<int>(columns.rows());
    Eigen::JacobiSVD<Mat> svd(columns);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (!(smin > 0.0) || !(smax / smin < cond_bound)) {
        std::ostringstream ss;
        ss << "basis: column matrix singular or ill-conditioned (cond bound " << cond_bound
           << ")";
        throw InstanceError(ss.str());
    }
    Mat duals = columns.fullPivLu().inverse();
    const double residual = (duals * columns - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
    if (residual > kBiorthTol) {
        throw InstanceError("basis: biorthogonality residual exceeds 1e-10");
    }
    return Basis(columns, std::move(duals));
}

Basis Basis::canonical(int n) {
    return Basis(Mat::Identity(n, n), Mat::Identity(n, n));
}

bool Basis::is_canonical(double tol) const {
    const int n = dim();
    return (vectors_ - Mat::Identity(n, n)).cwiseAbs().maxCoeff() <= tol;
}

Vec Basis::dual_coefficients(const Vec& x) const {
    if (x.size() != dim()) throw InstanceError("dual_coefficients: dimension mismatch");
    return duals_ * x;
}

Vec Basis::combine(const Vec& coeffs) const {
    if (coeffs.size() != dim()) throw InstanceError("combine: dimension mismatch");
    return vectors_ * coeffs;
}

Basis make_basis(const Mat& columns, double cond_bound) {
    return Basis::make(columns, cond_bound);
}

Vec dual_coefficients(const Basis& basis, const Vec& x) {
    return basis.dual_coefficients(x);
}

std::vector<double> element_norms(const NormedSpace& space, const Basis& basis) {
    if (space.dim() != basis.dim()) throw InstanceError("element_norms: dimension mismatch");
    std::vector<double> out(static_cast<size_t>(basis.dim()));
    for (int i = 0; i < basis.dim(); ++i) {
        const double v = space.norm(basis.element(i));
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InstanceError("basis element " + std::to_string(i + 1) +
                                " has zero or non-finite norm");
        }
        out[static_cast<size_t>(i)] = v;
    }
    return out;
}

}  // namespace gbl
