#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace gbl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Index set over basis positions, 0-based, sorted ascending.
using IndexSet = std::vector<int>;

/// Coefficients with magnitude at or below this are treated as zero when
/// computing supports and detecting ties between coefficient magnitudes.
inline constexpr double kTieTol = 1e-12;

/// Biorthogonality residual allowed for a basis and its dual system.
inline constexpr double kBiorthTol = 1e-10;

/// Default condition-number bound for basis inversion.
inline constexpr double kDefaultCondBound = 1e12;

}  // namespace gbl
