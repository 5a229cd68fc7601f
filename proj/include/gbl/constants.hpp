#pragma once

#include <cstdint>
#include <string>

#include "gbl/basis.hpp"
#include "gbl/space.hpp"
#include "gbl/types.hpp"

namespace gbl {

enum class Exactness { Exact, LowerBound };
enum class Method { ClosedForm, Eigen, VertexEnum, Search };

const char* to_string(Exactness e);
const char* to_string(Method m);

/// Maximizing witness of a constant estimate. For the suppression constant
/// `indices` is the projection set A; for the greedy-operator constants it is
/// the greedy set Lambda (N = indices.size()).
struct Witness {
    Vec x;
    IndexSet indices;
    double ratio = 1.0;
};

struct ConstantEstimate {
    double value = 1.0;
    Exactness exactness = Exactness::LowerBound;
    Witness witness;
    Method method = Method::Search;
    std::uint64_t budget_used = 0;
};

/// Search configuration shared by the estimators. Restart sampling is
/// deterministic for a fixed seed, independent of thread count.
struct SearchBudget {
    int restarts = 10'000;
    int polish_steps = 200;
    std::uint64_t seed = 0;
};

/// Which ratio a greedy-operator search maximizes.
enum class GreedyRatioKind {
    Sum,       // ||G_N(x)|| / ||x||
    Residual,  // ||x - G_N(x)|| / ||x||
};

struct SearchOutcome {
    double best = 1.0;
    Witness witness;
    std::uint64_t evals = 0;
};

/// K_su = sup over nonempty proper A of ||P_A||. Exact via generalized
/// eigenproblems for quadratic norms, via unit-ball vertex enumeration for
/// polyhedral norms in dimension <= 6, closed-form 1 for coordinate-wise
/// monotone cases; otherwise a certified lower bound from search.
/// Requires n <= 20 (subset enumeration guard).
ConstantEstimate suppression_constant(const NormedSpace& space, const Basis& basis,
                                      const SearchBudget& budget = {});

/// Smallest C with ||G_N x|| <= C ||x||, estimated by restart search; exact
/// only when K_su = 1 is certified (see ct_constant for the residual form).
ConstantEstimate cw_constant(const NormedSpace& space, const Basis& basis,
                             const SearchBudget& budget = {});

ConstantEstimate ct_constant(const NormedSpace& space, const Basis& basis,
                             const SearchBudget& budget = {});

/// max(C_w, C_t), carrying the winning witness; exact iff both parts are.
ConstantEstimate cqg_constant(const NormedSpace& space, const Basis& basis,
                              const SearchBudget& budget = {});

/// ||P_A|| in the norm sqrt(x'Gx) for the canonical basis: square root of the
/// largest generalized eigenvalue of (D_A G D_A, G) with D_A the coordinate
/// mask. Throws ContractError for empty A, Error on eigen-solver failure.
double rayleigh_su_quadratic(const Mat& G, const IndexSet& A);

/// Raw restart searches backing the estimators; exposed so callers can probe
/// an instance without the exactness promotion shortcuts.
SearchOutcome greedy_ratio_search(const NormedSpace& space, const Basis& basis,
                                  GreedyRatioKind kind, const SearchBudget& budget);
SearchOutcome suppression_search(const NormedSpace& space, const Basis& basis,
                                 const SearchBudget& budget);

/// Recompute a witness ratio from raw inputs. The greedy form additionally
/// re-validates that the witness index set is a greedy set of the witness
/// vector (ContractError otherwise).
double reevaluate_suppression_witness(const NormedSpace& space, const Basis& basis,
                                      const Witness& w);
double reevaluate_greedy_witness(const NormedSpace& space, const Basis& basis,
                                 const Witness& w, GreedyRatioKind kind);

/// Estimator worker-thread cap: GBL_THREADS env var when set, else
/// min(hardware_concurrency, 8), always >= 1.
int estimator_thread_cap();

}  // namespace gbl
