#include <cmath>

#include <doctest.h>

#include "gbl/constants.hpp"
#include "gbl/errors.hpp"
#include "gbl/gallery.hpp"
#include "gbl/greedy.hpp"
#include "gbl/rng.hpp"
#include "gbl/theorem.hpp"

#include "oracles.hpp"

using namespace gbl;

namespace {

const double kSqrt5Half = std::sqrt(5.0) / 2.0;

Vec v2(double a, double b) {
    Vec x(2);
    x << a, b;
    return x;
}

}  // namespace

TEST_CASE("splitting the shear suppression witness yields a disjoint violation") {
    const Instance inst = gallery_instance("shear-2");
    const ConstantEstimate ksu = suppression_constant(inst.space, inst.basis);
    const auto v = violation_from_suppression_witness(inst.space, inst.basis, ksu.witness);
    REQUIRE(v.has_value());
    CHECK(v->gap > 0.0);
    // Coefficient supports are disjoint: x lives on A, y on the complement.
    const Vec cx = inst.basis.dual_coefficients(v->x);
    const Vec cy = inst.basis.dual_coefficients(v->y);
    for (int i = 0; i < 2; ++i) {
        CHECK(std::min(std::abs(cx[i]), std::abs(cy[i])) < 1e-9);
    }
    CHECK(inst.space.norm(v->x + v->y) < inst.space.norm(v->x));
}

TEST_CASE("witness transfer reproduces the shear certificate") {
    const Instance inst = gallery_instance("shear-2");
    DisjointViolation v;
    v.x = v2(1.0, 0.0);
    v.y = v2(0.0, -0.4);
    v.gap = inst.space.norm(v.x) - inst.space.norm(v.x + v.y);
    REQUIRE(v.gap > 0.0);

    const GreedyViolationCertificate cert = witness_transfer(inst.space, inst.basis, v);
    CHECK(cert.N == 1);
    CHECK(cert.lambda == IndexSet{0});
    CHECK(cert.t_star == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(cert.ratio == doctest::Approx(kSqrt5Half).epsilon(1e-9));
    CHECK(cert.z[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(cert.z[1] == doctest::Approx(-0.4).epsilon(1e-6));

    // The certificate is checkable: Lambda is a valid greedy set and the
    // greedy sum expands the norm by exactly the stated ratio.
    const Vec c = inst.basis.dual_coefficients(cert.z);
    CHECK(is_valid_greedy_set(c, cert.lambda));
    Witness w{cert.z, cert.lambda, cert.ratio};
    const double re = reevaluate_greedy_witness(inst.space, inst.basis, w, GreedyRatioKind::Sum);
    CHECK(re == doctest::Approx(cert.ratio).epsilon(1e-9));
}

TEST_CASE("witness transfer reproduces the summing certificate ratio 2") {
    const Instance inst = gallery_instance("summing-2");
    DisjointViolation v;
    v.x = v2(0.0, -2.0);
    v.y = v2(1.0, 0.0);
    v.gap = inst.space.norm(v.x) - inst.space.norm(v.x + v.y);
    REQUIRE(v.gap == doctest::Approx(1.0));

    const GreedyViolationCertificate cert = witness_transfer(inst.space, inst.basis, v);
    CHECK(cert.N == 1);
    CHECK(cert.lambda == IndexSet{1});
    CHECK(cert.ratio == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(cert.z[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(cert.z[1] == doctest::Approx(-2.0).epsilon(1e-9));
}

TEST_CASE("witness transfer rejects degenerate input") {
    const Instance inst = gallery_instance("shear-2");
    DisjointViolation zero;
    zero.x = v2(0.0, 0.0);
    zero.y = v2(0.0, 1.0);
    zero.gap = 0.0;
    CHECK_THROWS_AS(witness_transfer(inst.space, inst.basis, zero), ContractError);

    DisjointViolation overlap;
    overlap.x = v2(1.0, 0.5);
    overlap.y = v2(0.0, -0.4);
    overlap.gap = 1.0;
    CHECK_THROWS_AS(witness_transfer(inst.space, inst.basis, overlap), ContractError);

    DisjointViolation nogap;  // l2: adding a disjoint vector only grows the norm
    NormedSpace l2(2, lp_norm(2.0));
    nogap.x = v2(1.0, 0.0);
    nogap.y = v2(0.0, 1.0);
    nogap.gap = -1.0;
    CHECK_THROWS_AS(witness_transfer(l2, inst.basis, nogap), ContractError);
}

TEST_CASE("transfer soundness over randomly generated violations") {
    // >= 10^3 violations from eigen witnesses of random quadratic instances.
    Rng rng(777);
    int produced = 0;
    int attempts = 0;
    while (produced < 1000 && attempts < 4000) {
        ++attempts;
        const int n = 2 + static_cast<int>(rng.next_u64() % 4);  // dims 2..5
        const Mat g = oracles::random_spd(rng, n);
        NormedSpace sp(n, quadratic_norm(g));
        Basis basis = Basis::canonical(n);
        const ConstantEstimate ksu = suppression_constant(sp, basis);
        if (ksu.value <= 1.0 + 1e-6) continue;
        const auto v = violation_from_suppression_witness(sp, basis, ksu.witness);
        if (!v) continue;
        ++produced;
        const GreedyViolationCertificate cert = witness_transfer(sp, basis, *v);
        CHECK(cert.ratio > 1.0 + 1e-12);
        const Vec c = basis.dual_coefficients(cert.z);
        CHECK(is_valid_greedy_set(c, cert.lambda));
    }
    CHECK(produced >= 1000);
}

TEST_CASE("find_disjoint_violation succeeds on expanding instances, not on l2") {
    const Instance shear = gallery_instance("shear-2");
    const auto v = find_disjoint_violation(shear.space, shear.basis);
    REQUIRE(v.has_value());
    CHECK(shear.space.norm(v->x + v->y) < shear.space.norm(v->x));

    const Instance l2 = gallery_instance("l2-canonical-3");
    CHECK_FALSE(find_disjoint_violation(l2.space, l2.basis).has_value());
}

TEST_CASE("hilbert orthogonality witness: shear pair, closed form") {
    Mat g(2, 2);
    g << 1.0, 0.5, 0.5, 1.25;
    const auto hw = hilbert_orthogonality_witness(g, 0, 1);
    REQUIRE(hw.has_value());
    CHECK(hw->epsilon == -1);
    CHECK(hw->t == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(hw->certificate.ratio == doctest::Approx(kSqrt5Half).epsilon(1e-12));
    CHECK(hw->certificate.N == 1);
    CHECK(hw->certificate.lambda == IndexSet{0});
    CHECK(hw->certificate.z[0] == doctest::Approx(1.0));
    CHECK(hw->certificate.z[1] == doctest::Approx(-0.4));

    // Closed form sqrt(G_ii / (G_ii - G_ij^2 / G_jj)).
    const double expect = std::sqrt(1.0 / (1.0 - 0.25 / 1.25));
    CHECK(hw->certificate.ratio == doctest::Approx(expect).epsilon(1e-12));

    // Reversed pair: certificate built on e_2 against e_1.
    const auto rev = hilbert_orthogonality_witness(g, 1, 0);
    REQUIRE(rev.has_value());
    const double expect_rev = std::sqrt(1.25 / (1.25 - 0.25 / 1.0));
    CHECK(rev->certificate.ratio == doctest::Approx(expect_rev).epsilon(1e-12));
}

TEST_CASE("hilbert witness dichotomy on random SPD matrices") {
    Rng rng(1234);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 4);
        const Mat g = oracles::random_spd(rng, n);
        NormedSpace sp(n, quadratic_norm(g));
        Basis basis = Basis::canonical(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                const auto hw = hilbert_orthogonality_witness(g, i, j);
                if (std::abs(g(i, j)) > 1e-12) {
                    REQUIRE(hw.has_value());
                    Witness w{hw->certificate.z, hw->certificate.lambda, hw->certificate.ratio};
                    const double re =
                        reevaluate_greedy_witness(sp, basis, w, GreedyRatioKind::Sum);
                    CHECK(re > 1.0);
                    CHECK(re == doctest::Approx(hw->certificate.ratio).epsilon(1e-9));
                } else {
                    CHECK_FALSE(hw.has_value());
                }
            }
        }
    }

    // Diagonal G: no pair produces a witness.
    Mat d = Mat::Zero(3, 3);
    d(0, 0) = 2.0;
    d(1, 1) = 0.5;
    d(2, 2) = 1.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i != j) CHECK_FALSE(hilbert_orthogonality_witness(d, i, j).has_value());
        }
    }

    CHECK_THROWS_AS(hilbert_orthogonality_witness(d, 1, 1), ContractError);
    CHECK_THROWS_AS(hilbert_orthogonality_witness(d, 0, 3), ContractError);
}

TEST_CASE("renorm gives K_su = 1 exactly and is idempotent") {
    const Instance inst = gallery_instance("shear-2");
    const NormedSpace renormed = renorm_suppression(inst.space, inst.basis);
    REQUIRE(renormed.is_derived());

    const ConstantEstimate ksu = suppression_constant(renormed, inst.basis);
    CHECK(ksu.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ksu.exactness == Exactness::Exact);

    // Equivalence sandwich ||x|| <= |||x||| <= K_su ||x||.
    const ConstantEstimate base_ksu = suppression_constant(inst.space, inst.basis);
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec x = rng.sphere(2) * rng.uniform(0.5, 2.0);
        const double nb = inst.space.norm(x);
        const double nr = renormed.norm(x);
        CHECK(nr >= nb - 1e-12);
        CHECK(nr <= base_ksu.value * nb + 1e-9);
    }

    // Renorming the already-renormed space is the identity.
    const NormedSpace again = renorm_suppression(renormed, inst.basis);
    Rng rng2(32);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec x = rng2.sphere(2);
        CHECK(again.norm(x) == doctest::Approx(renormed.norm(x)).epsilon(1e-14));
    }
}

TEST_CASE("renorm of l2 is identity-equivalent") {
    const Instance inst = gallery_instance("l2-canonical-4");
    const NormedSpace renormed = renorm_suppression(inst.space, inst.basis);
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec x = rng.sphere(4);
        CHECK(renormed.norm(x) == doctest::Approx(inst.space.norm(x)).epsilon(1e-12));
    }
    const ConstantEstimate ksu = suppression_constant(renormed, inst.basis);
    CHECK(ksu.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("renorm dimension guard") {
    const int n = 21;
    NormedSpace sp(n, lp_norm(2.0));
    CHECK_THROWS_AS(renorm_suppression(sp, Basis::canonical(n)), ContractError);
}

TEST_CASE("verify_characterization: expanding instances transfer, l2 promotes") {
    const Instance shear = gallery_instance("shear-2");
    const Verdict vs = verify_characterization(shear.space, shear.basis);
    CHECK(vs.consistent);
    REQUIRE(vs.certificate.has_value());
    CHECK(vs.certificate->ratio == doctest::Approx(kSqrt5Half).epsilon(1e-9));
    CHECK(vs.cw.value >= kSqrt5Half - 1e-6);

    const Instance summing = gallery_instance("summing-2");
    const Verdict vsum = verify_characterization(summing.space, summing.basis);
    CHECK(vsum.consistent);
    REQUIRE(vsum.certificate.has_value());
    CHECK(vsum.certificate->ratio == doctest::Approx(2.0).epsilon(1e-9));

    const Instance l2 = gallery_instance("l2-canonical-3");
    const Verdict vl2 = verify_characterization(l2.space, l2.basis);
    CHECK(vl2.consistent);
    CHECK(vl2.ksu.value == doctest::Approx(1.0));
    CHECK(vl2.cw.value == doctest::Approx(1.0));
    CHECK(vl2.cw.exactness == Exactness::Exact);
    CHECK_FALSE(vl2.certificate.has_value());
}

TEST_CASE("negative tolerance forces the inconsistency branch (exit-2 route)") {
    // With tol = -0.5 an exact K_su = 1 no longer counts as "1", so the
    // converse direction must fail: there is no violation to transfer.
    const Instance l2 = gallery_instance("l2-canonical-2");
    const Verdict v = verify_characterization(l2.space, l2.basis, -0.5);
    CHECK_FALSE(v.consistent);
}
