#pragma once

#include <limits>

#include "gbl/basis.hpp"
#include "gbl/types.hpp"

namespace gbl {

/// A greedy index set Lambda of size N for a coefficient vector: every
/// magnitude inside dominates every magnitude outside (up to the tie
/// tolerance). threshold_in is the smallest magnitude kept, threshold_out
/// the largest dropped; tied marks selections produced by a tie at the cut.
struct GreedySelection {
    IndexSet indices;
    double threshold_in = std::numeric_limits<double>::infinity();
    double threshold_out = 0.0;
    bool tied = false;
};

enum class TieMode {
    OneValid,  // deterministic single selection, lower index wins ties
    AllValid,  // enumerate every selection valid under the tie tolerance
};

/// All greedy sets of size N for the given coefficients. Throws ContractError
/// if N is out of [0, n]. In OneValid mode the result has exactly one entry.
std::vector<GreedySelection> greedy_sets(const Vec& coeffs, int N, TieMode mode,
                                         double tie_tol = kTieTol);

/// True iff idx is a valid greedy set for coeffs (|idx| arbitrary), i.e.
/// min inside >= max outside - tie_tol.
bool is_valid_greedy_set(const Vec& coeffs, const IndexSet& idx, double tie_tol = kTieTol);

/// P_A x = sum_{i in A} e*_i(x) e_i. Throws ContractError on an out-of-range
/// index, InstanceError on dimension mismatch.
Vec projection(const Basis& basis, const Vec& x, const IndexSet& A);

/// G_N(x) for the given selection; validates that the selection is a greedy
/// set for x's coefficients (ContractError otherwise).
Vec greedy_sum(const Basis& basis, const Vec& x, const GreedySelection& selection);

/// x - G_N(x); same contract as greedy_sum.
Vec residual(const Basis& basis, const Vec& x, const GreedySelection& selection);

}  // namespace gbl
