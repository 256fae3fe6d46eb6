#include <doctest.h>

#include <hodgekit/period_map.hpp>

#include <cmath>
#include <stdexcept>

using namespace hodgekit;

namespace {

Mat random_mat(Rng& rng, int r, int c, double scale) {
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = scale * rng.normal_complex();
    return m;
}

// Dense oracle for the purity determinant: assemble the full matrix and let
// LU compute it, independent of the block-elimination path.
cplx dense_purity(const BlockUpperUnipotent& b) {
    Mat m = Mat::Identity(b.dim(), b.dim());
    m.block(0, b.h20, b.h20, b.h11) = b.B01;
    m.block(0, b.h20 + b.h11, b.h20, b.h02) = b.B02;
    m.block(b.h20, b.h20 + b.h11, b.h11, b.h02) = b.B12;
    m.block(b.h20 + b.h11, 0, b.h02, b.h20) = b.B02.conjugate();
    m.block(b.h20 + b.h11, b.h20, b.h02, b.h11) = b.B01.conjugate();
    return Eigen::FullPivLU<Mat>(m).determinant();
}

} // namespace

TEST_SUITE("period_map") {

TEST_CASE("torus frame in dimension two is orthonormal with the expected sizes") {
    TorusBackend b(2, 1, cplx(0, 1), 1.0);
    HodgeFrame f = make_torus_frame(b);
    CHECK(f.h20 == 1);
    CHECK(f.h11 == 4);
    CHECK(f.h02 == 1);
    CHECK(f.dim() == 6);
    CHECK(validate_frame(b, f).empty());
    REQUIRE(f.Q.rows() == 6);
    // The wedge pairing of two 2-forms is symmetric and nondegenerate.
    CHECK((f.Q - f.Q.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(Eigen::FullPivLU<Mat>(f.Q).determinant()) > 1e-8);
}

TEST_CASE("quasi-period of the zero form is the identity block") {
    TorusBackend b(2, 1, cplx(0, 1), 1.0);
    HodgeFrame f = make_torus_frame(b);
    BlockUpperUnipotent blocks = quasi_period(b, f, b.zero_vector_form(1));
    CHECK(blocks.B01.cwiseAbs().maxCoeff() < 1e-14);
    CHECK(blocks.B02.cwiseAbs().maxCoeff() < 1e-14);
    CHECK(blocks.B12.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("single-entry constant form fills disjoint block slots of its own size") {
    TorusBackend b(2, 0, cplx(0, 1), 1.0);
    HodgeFrame f = make_torus_frame(b);
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = cplx(0.3, 0.0);
    BlockUpperUnipotent blocks = quasi_period(b, f, b.constant_vector01(m));
    // One contraction moves dz1 to dzbar1; the corner needs two holomorphic
    // slots in the same direction and vanishes.
    int nonzero01 = 0, nonzero12 = 0;
    for (int j = 0; j < 4; ++j) {
        if (std::abs(blocks.B01(0, j)) > 1e-12) {
            ++nonzero01;
            CHECK(std::abs(blocks.B01(0, j)) == doctest::Approx(0.3).epsilon(1e-10));
        }
        if (std::abs(blocks.B12(j, 0)) > 1e-12) {
            ++nonzero12;
            CHECK(std::abs(blocks.B12(j, 0)) == doctest::Approx(0.3).epsilon(1e-10));
        }
    }
    CHECK(nonzero01 == 1);
    CHECK(nonzero12 == 1);
    CHECK(blocks.B02.cwiseAbs().maxCoeff() < 1e-13);
    // The filled slots are disjoint, so the purity determinant is exactly one.
    CHECK(std::abs(purity_determinant(blocks) - cplx(1.0, 0.0)) < 1e-12);
}

TEST_CASE("quasi-period requires a contracting Beltrami form") {
    TorusBackend b(2, 0, cplx(0, 1), 1.0);
    HodgeFrame f = make_torus_frame(b);
    Mat m = Mat::Identity(2, 2) * cplx(1.5, 0.0);
    CHECK_THROWS_AS(quasi_period(b, f, b.constant_vector01(m)), std::invalid_argument);
}

TEST_CASE("gauge-equivalent representatives map to the same period point") {
    // The constant coefficient matrix and its pullback through a shear
    // isotopic to the identity describe the same deformed structure: the
    // blocks must coincide even though the inputs differ.
    TorusBackend b(2, 3, cplx(0.3, 1.1), 2.0);
    HodgeFrame f = make_torus_frame(b);
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = cplx(0.25, 0.10);
    m(0, 1) = cplx(-0.10, 0.05);
    m(1, 1) = cplx(0.10, -0.20);
    std::vector<int> mu{0, 1, 0, -1};
    TorusForm base = b.constant_vector01(m);
    TorusForm sheared = b.sheared_vector01(m, mu, 0.02);
    CHECK(b.w0_norm(sheared - base) > 1e-3); // genuinely different inputs
    BlockUpperUnipotent pa = quasi_period(b, f, base);
    BlockUpperUnipotent pb = quasi_period(b, f, sheared);
    CHECK((pa.B01 - pb.B01).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((pa.B12 - pb.B12).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((pa.B02 - pb.B02).cwiseAbs().maxCoeff() < 1e-9);
    // Discrimination: the same-size change of the constant matrix itself is
    // not gauge-trivial and moves the blocks by orders of magnitude more.
    Mat m2 = m;
    m2(0, 1) += cplx(0.02, 0.0);
    BlockUpperUnipotent pc = quasi_period(b, f, b.constant_vector01(m2));
    CHECK((pa.B01 - pc.B01).cwiseAbs().maxCoeff() > 1e-4);
}

TEST_CASE("sheared representative construction rejects unsupported inputs") {
    TorusBackend b(2, 2, cplx(0, 1), 1.0);
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = cplx(0.3, 0.0);
    std::vector<int> mu{0, 1, 0, 0};
    CHECK_NOTHROW(b.sheared_vector01(m, mu, 0.05));
    Mat lower = m;
    lower(1, 0) = cplx(0.1, 0.0); // pullback no longer closed-form
    CHECK_THROWS_AS(b.sheared_vector01(lower, mu, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(b.sheared_vector01(m, {1, 0, 0, 0}, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(b.sheared_vector01(m, {0, 0, 0, 0}, 0.05), std::invalid_argument);
    TorusBackend b1(1, 2, cplx(0, 1), 1.0);
    CHECK_THROWS_AS(b1.sheared_vector01(Mat::Zero(1, 1), mu, 0.05), std::invalid_argument);
}

TEST_CASE("purity determinant matches the dense LU oracle") {
    Rng rng(51);
    for (auto [h20, h11] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 3}}) {
        for (int rep = 0; rep < 50; ++rep) {
            BlockUpperUnipotent blk(h20, h11, h20);
            blk.B01 = random_mat(rng, h20, h11, 0.4);
            blk.B02 = random_mat(rng, h20, h20, 0.4);
            blk.B12 = random_mat(rng, h11, h20, 0.4);
            cplx fast = purity_determinant(blk);
            cplx slow = dense_purity(blk);
            CHECK(std::abs(fast - slow) < 1e-10 * std::max(1.0, std::abs(slow)));
        }
    }
    // All-zero blocks give determinant one exactly.
    CHECK(purity_determinant(BlockUpperUnipotent(2, 3, 2)) == cplx(1.0, 0.0));
}

TEST_CASE("scalar purity determinant has the closed form 1 - conj(a)c + a conj(b)c - |b|^2")
{
    Rng rng(52);
    for (int rep = 0; rep < 100; ++rep) {
        cplx a = rng.normal_complex(), bb = rng.normal_complex(), c = rng.normal_complex();
        BlockUpperUnipotent blk(1, 1, 1);
        blk.B01(0, 0) = a;
        blk.B02(0, 0) = bb;
        blk.B12(0, 0) = c;
        cplx expect = cplx(1.0, 0.0) - std::conj(a) * c + a * std::conj(bb) * c -
                      cplx(std::norm(bb), 0.0);
        CHECK(std::abs(purity_determinant(blk) - expect) < 1e-12 *
              std::max(1.0, std::abs(expect)));
    }
}

TEST_CASE("transversality: polynomial curves are resolved exactly by central differences") {
    // B01 = t p, B12 = t q, B02 = (t^2 / 2) p q satisfies the condition.
    cplx p(0.7, 0.2), q(-0.4, 0.5);
    auto good = [&](double t) {
        BlockUpperUnipotent blk(1, 1, 1);
        blk.B01(0, 0) = t * p;
        blk.B12(0, 0) = t * q;
        blk.B02(0, 0) = 0.5 * t * t * p * q;
        return blk;
    };
    CHECK(transversality_check(good, 0.3, 1e-4) < 1e-10);
    // An order-one corner with no first block cannot satisfy it.
    cplx r(0.9, 0.0);
    auto bad = [&](double t) {
        BlockUpperUnipotent blk(1, 1, 1);
        blk.B02(0, 0) = t * r;
        return blk;
    };
    CHECK(transversality_check(bad, 0.3, 1e-4) > 0.1);
}

TEST_CASE("transversality holds along the solved torus block curve") {
    TorusBackend b(2, 0, cplx(0, 1), 1.0);
    HodgeFrame f = make_torus_frame(b);
    Mat m(2, 2);
    m << cplx(0.5, 0.1), cplx(0.2, 0.0), cplx(0.0, -0.3), cplx(0.4, 0.2);
    m *= 0.5;
    auto curve = [&](double t) { return quasi_period(b, f, b.constant_vector01(t * m)); };
    CHECK(transversality_check(curve, 0.3, 1e-4) < 1e-8);
}

TEST_CASE("stability radius: envelope sampler yields a positive certified radius") {
    Rng rng(53);
    StabilityRadiusReport rep = stability_radius(block_sampler_envelope(1, 2, 1), 6, rng, 1e-6);
    CHECK(rep.trials == 6);
    CHECK(rep.radius > 0.05);
    CHECK(rep.radius <= rep.cap);
    if (!rep.saturated) CHECK(rep.worst_det >= 1e-6);
}

TEST_CASE("stability radius treats sampler failures as instability") {
    BlockSampler fragile = [](double r, Rng&) {
        if (r > 0.5) throw std::runtime_error("no sample here");
        return BlockUpperUnipotent(1, 1, 1); // identity: always pure
    };
    Rng rng(54);
    StabilityRadiusReport rep = stability_radius(fragile, 4, rng, 1e-6);
    CHECK(rep.radius <= 0.5 + 1e-9);
    CHECK(rep.radius >= 0.49);
}

TEST_CASE("torus block sampler produces finite well-conditioned samples") {
    TorusBackend b(2, 0, cplx(0, 1), 1.0);
    HodgeFrame f = make_torus_frame(b);
    BlockSampler sampler = block_sampler_torus(b, f);
    Rng rng(55);
    BlockUpperUnipotent blk = sampler(0.3, rng);
    CHECK(blk.B01.allFinite());
    CHECK(blk.B02.allFinite());
    CHECK(blk.B12.allFinite());
    CHECK(std::abs(purity_determinant(blk)) > 0.3);
}

} // TEST_SUITE
