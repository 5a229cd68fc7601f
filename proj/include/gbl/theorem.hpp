#pragma once

#include <optional>
#include <string>

#include "gbl/constants.hpp"

namespace gbl {

/// A pair of vectors with disjoint coefficient supports and ||x+y|| < ||x||:
/// direct evidence that some coordinate projection expands the norm.
struct DisjointViolation {
    Vec x;
    Vec y;
    double gap = 0.0;  // ||x|| - ||x+y|| > 0
};

/// A vector z whose greedy sum expands the norm: ||G_N(z)|| / ||z|| > 1 with
/// Lambda a valid greedy set of z. t_star records the mixing parameter used
/// to build z from a disjoint violation (1 when constructed directly).
struct GreedyViolationCertificate {
    Vec z;
    int N = 0;
    IndexSet lambda;
    double ratio = 1.0;
    double t_star = 1.0;
};

/// Outcome of checking an instance against the K_su = 1 <-> C_w = 1
/// equivalence at witness level.
struct Verdict {
    ConstantEstimate ksu;
    ConstantEstimate cw;
    bool consistent = true;
    std::string explanation;
    std::optional<DisjointViolation> violation;
    std::optional<GreedyViolationCertificate> certificate;
};

/// Searches for a disjoint-support violation. Runs the suppression estimator
/// and splits its witness across A and the complement when the ratio exceeds
/// one; returns nullopt otherwise. For non-exact methods absence of a result
/// is inconclusive, not a proof.
std::optional<DisjointViolation> find_disjoint_violation(const NormedSpace& space,
                                                         const Basis& basis,
                                                         const SearchBudget& budget = {});

/// Splits an explicit suppression witness (A, x_hat) with ratio > 1 into a
/// disjoint violation x = P_A x_hat, y = x_hat - x. Returns nullopt if the
/// split fails its invariants after coefficient cleanup.
std::optional<DisjointViolation> violation_from_suppression_witness(const NormedSpace& space,
                                                                    const Basis& basis,
                                                                    const Witness& w);

/// Converts a disjoint violation into a greedy violation certificate:
/// z = x + t* y with t* minimizing the convex map t -> ||x + t y|| over
/// (0, t_max], t_max chosen so supp(x) stays a valid greedy set of z.
/// Throws ContractError on degenerate input (x = 0, y = 0, overlapping
/// supports, or a nonpositive gap).
GreedyViolationCertificate witness_transfer(const NormedSpace& space, const Basis& basis,
                                            const DisjointViolation& v);

struct HilbertWitness {
    int epsilon = -1;  // sign placed on e_j
    double t = 0.0;
    GreedyViolationCertificate certificate;
};

/// For the canonical basis of the norm sqrt(x'Gx): if <e_i, e_j> = G_ij is
/// nonzero, produces z = e_i + eps*t*e_j with ||G_1(z)|| > ||z||, the witness
/// that a non-orthogonal pair already defeats norm-1 greedy boundedness.
/// Returns nullopt when |G_ij| <= 1e-12. Throws ContractError if i == j.
std::optional<HilbertWitness> hilbert_orthogonality_witness(const Mat& G, int i, int j);

/// Equivalent norm |||x||| = max over nonempty A of ||P_A x||; every
/// coordinate projection is contractive under it, so the derived space has
/// K_su = 1. Requires n <= 20. Returns the input space unchanged when it
/// already carries this derived norm for the same basis.
NormedSpace renorm_suppression(const NormedSpace& space, const Basis& basis);

/// Computes K_su and the greedy search bound and checks them against each
/// other: K_su = 1 must leave the search empty-handed, K_su > 1 must transfer
/// to a greedy violation certificate. Inconsistency indicates a bug.
Verdict verify_characterization(const NormedSpace& space, const Basis& basis,
                                double tol = 1e-9, const SearchBudget& budget = {});

}  // namespace gbl
