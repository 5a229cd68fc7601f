#include "gbl/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gbl/errors.hpp"

namespace gbl {

namespace {

// Indices sorted by (|c| descending, index ascending).
std::vector<int> magnitude_order(const Vec& coeffs) {
    std::vector<int> order(static_cast<size_t>(coeffs.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const double ma = std::abs(coeffs[a]);
        const double mb = std::abs(coeffs[b]);
        if (ma != mb) return ma > mb;
        return a < b;
    });
    return order;
}

GreedySelection build_selection(const Vec& coeffs, IndexSet idx, bool tied) {
    GreedySelection sel;
    std::sort(idx.begin(), idx.end());
    sel.indices = std::move(idx);
    sel.tied = tied;
    sel.threshold_in = std::numeric_limits<double>::infinity();
    sel.threshold_out = 0.0;
    std::vector<char> in(static_cast<size_t>(coeffs.size()), 0);
    for (int i : sel.indices) in[static_cast<size_t>(i)] = 1;
    for (int i = 0; i < coeffs.size(); ++i) {
        const double m = std::abs(coeffs[i]);
        if (in[static_cast<size_t>(i)]) {
            sel.threshold_in = std::min(sel.threshold_in, m);
        } else {
            sel.threshold_out = std::max(sel.threshold_out, m);
        }
    }
    return sel;
}

}  // namespace

std::vector<GreedySelection> greedy_sets(const Vec& coeffs, int N, TieMode mode,
                                         double tie_tol) {
    const int n = static_cast<int>(coeffs.size());
    if (N < 0 || N > n) throw ContractError("greedy_sets: N out of range [0, n]");

    if (N == 0) return {build_selection(coeffs, {}, false)};
    const auto order = magnitude_order(coeffs);
    if (N == n) {
        return {build_selection(coeffs, IndexSet(order.begin(), order.end()), false)};
    }

    auto mag = [&](int pos) { return std::abs(coeffs[order[static_cast<size_t>(pos)]]); };
    const bool tied_at_cut = (mag(N - 1) - mag(N)) <= tie_tol;

    if (mode == TieMode::OneValid || !tied_at_cut) {
        IndexSet idx(order.begin(), order.begin() + N);
        return {build_selection(coeffs, std::move(idx), tied_at_cut)};
    }

    // The maximal run of sorted positions with adjacent gaps <= tie_tol that
    // straddles the cut; any N - a of its members may complete the selection.
    int a = N - 1;
    while (a > 0 && (mag(a - 1) - mag(a)) <= tie_tol) --a;
    int b = N;
    while (b + 1 < n && (mag(b) - mag(b + 1)) <= tie_tol) ++b;

    const int cluster = b - a + 1;
    const int take = N - a;
    IndexSet head(order.begin(), order.begin() + a);

    std::vector<GreedySelection> out;
    std::vector<int> pick(static_cast<size_t>(take));
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
        IndexSet idx = head;
        for (int p : pick) idx.push_back(order[static_cast<size_t>(a + p)]);
        out.push_back(build_selection(coeffs, std::move(idx), true));
        // next combination of `take` out of `cluster`
        int i = take - 1;
        while (i >= 0 && pick[static_cast<size_t>(i)] == cluster - take + i) --i;
        if (i < 0) break;
        ++pick[static_cast<size_t>(i)];
        for (int j = i + 1; j < take; ++j) {
            pick[static_cast<size_t>(j)] = pick[static_cast<size_t>(j - 1)] + 1;
        }
    }
    return out;
}

bool is_valid_greedy_set(const Vec& coeffs, const IndexSet& idx, double tie_tol) {
    const int n = static_cast<int>(coeffs.size());
    std::vector<char> in(static_cast<size_t>(n), 0);
    for (int i : idx) {
        if (i < 0 || i >= n) return false;
        in[static_cast<size_t>(i)] = 1;
    }
    double min_in = std::numeric_limits<double>::infinity();
    double max_out = 0.0;
    for (int i = 0; i < n; ++i) {
        const double m = std::abs(coeffs[i]);
        if (in[static_cast<size_t>(i)]) {
            min_in = std::min(min_in, m);
        } else {
            max_out = std::max(max_out, m);
        }
    }
    return min_in >= max_out - tie_tol;
}

Vec projection(const Basis& basis, const Vec& x, const IndexSet& A) {
    if (x.size() != basis.dim()) throw InstanceError("projection: dimension mismatch");
    const Vec c = basis.dual_coefficients(x);
    Vec y = Vec::Zero(basis.dim());
    for (int i : A) {
        if (i < 0 || i >= basis.dim()) throw ContractError("projection: index out of range");
        y.noalias() += c[i] * basis.vectors().col(i);
    }
    return y;
}

Vec greedy_sum(const Basis& basis, const Vec& x, const GreedySelection& selection) {
    const Vec c = basis.dual_coefficients(x);
    if (!is_valid_greedy_set(c, selection.indices)) {
        throw ContractError("greedy_sum: selection is not a valid greedy set for x");
    }
    return projection(basis, x, selection.indices);
}

Vec residual(const Basis& basis, const Vec& x, const GreedySelection& selection) {
    return x - greedy_sum(basis, x, selection);
}

}  // namespace gbl
