#include "gbl/space.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "gbl/errors.hpp"
#include "gbl/subsets.hpp"

namespace gbl {

namespace {

double lp_of(const Eigen::Ref<const Vec>& x, double p) {
    if (std::isinf(p)) return x.cwiseAbs().maxCoeff();
    if (p == 1.0) return x.cwiseAbs().sum();
    if (p == 2.0) return x.norm();
    // Scale by the max to keep pow() in range.
    const double m = x.cwiseAbs().maxCoeff();
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]) / m, p);
    return m * std::pow(s, 1.0 / p);
}

double weighted_lp_of(const Eigen::Ref<const Vec>& x, const Vec& w, double p) {
    if (std::isinf(p)) return (w.cwiseProduct(x.cwiseAbs())).maxCoeff();
    const double m = x.cwiseAbs().maxCoeff();
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += w[i] * std::pow(std::abs(x[i]) / m, p);
    return m * std::pow(s, 1.0 / p);
}

// Per-thread scratch for the derived-norm enumeration; norm evaluation stays
// const and safe under concurrency.
struct DerivedScratch {
    Vec coeffs;
    Vec acc;
};

DerivedScratch& derived_scratch(int n) {
    thread_local DerivedScratch s;
    if (s.coeffs.size() != n) {
        s.coeffs.resize(n);
        s.acc.resize(n);
    }
    return s;
}

}  // namespace

NormedSpace::NormedSpace(int dim, NormSpec spec) : dim_(dim), spec_(std::move(spec)) {
    auto report = validate_norm_spec(spec_, dim_);
    if (!report.ok()) {
        throw InstanceError("invalid norm spec: " + report.joined());
    }
    if (spec_.is<SuppressionRenorm>()) {
        const auto& d = spec_.as<SuppressionRenorm>();
        derived_duals_ = d.columns.fullPivLu().inverse();
        base_space_ = std::make_shared<const NormedSpace>(dim_, *d.base);
    }
}

double NormedSpace::norm(const Vec& x) const {
    if (x.size() != dim_) throw InstanceError("norm: dimension mismatch");
    if (!x.allFinite()) throw InstanceError("norm: vector entries must be finite");
    return norm_unchecked(x);
}

double NormedSpace::norm_unchecked(const Vec& x) const {
    switch (spec_.v.index()) {
        case 0:
            return lp_of(x, spec_.as<LpNorm>().p);
        case 1: {
            const auto& w = spec_.as<WeightedLpNorm>();
            return weighted_lp_of(x, w.weights, w.p);
        }
        case 2: {
            const Mat& G = spec_.as<QuadraticNorm>().gram;
            const double q = x.dot(G * x);
            return std::sqrt(std::max(q, 0.0));
        }
        case 3:
            return (spec_.as<PolyhedralNorm>().rows * x).cwiseAbs().maxCoeff();
        case 4: {
            // max over nonempty A of base ||P_A x||, Gray-code accumulation.
            const auto& d = spec_.as<SuppressionRenorm>();
            auto& s = derived_scratch(dim_);
            s.coeffs.noalias() = derived_duals_ * x;
            s.acc.setZero();
            double best = 0.0;
            for_each_nonempty_subset_gray(dim_, [&](int bit, bool added, std::uint32_t) {
                const double c = added ? s.coeffs[bit] : -s.coeffs[bit];
                s.acc.noalias() += c * d.columns.col(bit);
                best = std::max(best, base_space_->norm_unchecked(s.acc));
            });
            return best;
        }
    }
    return 0.0;
}

double norm(const NormedSpace& space, const Vec& x) { return space.norm(x); }

}  // namespace gbl
