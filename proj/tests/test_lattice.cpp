#include <doctest.h>

#include <hodgekit/lattice.hpp>
#include <hodgekit/multi_index.hpp>
#include <hodgekit/rng.hpp>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

using namespace hodgekit;

namespace {

IntVec iv(std::initializer_list<std::int64_t> xs) {
    IntVec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (auto x : xs) v[i++] = x;
    return v;
}

CVec cv(std::initializer_list<cplx> xs) {
    CVec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (auto x : xs) v[i++] = x;
    return v;
}

std::int64_t det_llround(const IntMat& m) {
    Eigen::MatrixXd md = m.cast<double>();
    return std::llround(Eigen::FullPivLU<Eigen::MatrixXd>(md).determinant());
}

} // namespace

TEST_SUITE("lattice") {

TEST_CASE("preset lattices have the frozen signatures and determinants") {
    IntegralLattice u = IntegralLattice::hyperbolic_U();
    u.validate();
    CHECK(u.rank() == 2);
    CHECK(u.signature() == std::pair{1, 1});
    CHECK(det_llround(u.gram) == -1);

    IntegralLattice e8p = IntegralLattice::e8(+1);
    e8p.validate();
    CHECK(e8p.signature() == std::pair{8, 0});
    CHECK(det_llround(e8p.gram) == 1); // unimodular
    CHECK(e8p.gram.diagonal().minCoeff() == 2);
    IntegralLattice e8m = IntegralLattice::e8(-1);
    CHECK(e8m.signature() == std::pair{0, 8});

    IntegralLattice k3 = IntegralLattice::k3_full();
    k3.validate();
    CHECK(k3.rank() == 22);
    CHECK(k3.signature() == std::pair{3, 19});
    CHECK(det_llround(k3.gram) == -1);

    IntegralLattice toy = IntegralLattice::toy_rank3();
    toy.validate();
    CHECK(toy.signature() == std::pair{2, 1});

    CHECK(IntegralLattice::from_name("hyperbolic_U").gram == u.gram);
    CHECK(IntegralLattice::from_name("k3_full").gram == k3.gram);
    CHECK(IntegralLattice::from_name("toy_rank3").gram == toy.gram);
    CHECK_THROWS_AS(IntegralLattice::from_name("nope"), std::invalid_argument);

    IntegralLattice degenerate;
    degenerate.gram = IntMat::Zero(2, 2);
    CHECK_THROWS_AS(degenerate.validate(), std::invalid_argument);
    IntegralLattice asym;
    asym.gram = IntMat::Zero(2, 2);
    asym.gram(0, 1) = 1;
    CHECK_THROWS_AS(asym.validate(), std::invalid_argument);
}

TEST_CASE("extended pairing and the frozen square of the structure-sheaf vector") {
    IntegralLattice ns = IntegralLattice::hyperbolic_U();
    MukaiVector v = mukai_vector(1, iv({0, 0}), 0); // rank one, trivial class, ch2 = 0
    CHECK(v.a == 1);
    CHECK(mukai_pairing(v, v, ns) == -2);

    // Double duality: the pairing in extended coordinates equals the pairing
    // in the rank n+2 lattice.
    IntegralLattice big = mukai_lattice(ns);
    big.validate();
    CHECK(big.rank() == 4);
    CHECK(big.signature() == std::pair{2, 2});
    Rng rng(71);
    for (int rep = 0; rep < 30; ++rep) {
        auto draw = [&]() {
            return mukai_vector(static_cast<std::int64_t>(rng.next_u64() % 7) - 3,
                                iv({static_cast<std::int64_t>(rng.next_u64() % 7) - 3,
                                    static_cast<std::int64_t>(rng.next_u64() % 7) - 3}),
                                static_cast<std::int64_t>(rng.next_u64() % 7) - 3);
        };
        MukaiVector x = draw(), y = draw();
        CHECK(mukai_pairing(x, y, ns) == big.pair(mukai_coords(x), mukai_coords(y)));
        CHECK(mukai_pairing(x, y, ns) == mukai_pairing(y, x, ns));
    }
}

TEST_CASE("moduli dimensions of the point-length family") {
    IntegralLattice ns = IntegralLattice::hyperbolic_U();
    for (std::int64_t n = 1; n <= 5; ++n) {
        MukaiVector v = mukai_vector(1, iv({0, 0}), -n); // extended component a = 1 - n
        CHECK(v.a == 1 - n);
        ModuliDimension dim = moduli_dimension(v, ns);
        CHECK(dim.value == 2 * n);
        CHECK_FALSE(dim.warned_negative_square);
    }
    ModuliDimension rigid = moduli_dimension(mukai_vector(1, iv({0, 0}), 0), ns);
    CHECK(rigid.value == 0);
    CHECK(rigid.warned_negative_square);
}

TEST_CASE("slopes are exact rationals and the equal-slope case is flagged") {
    IntegralLattice ns = IntegralLattice::hyperbolic_U();
    IntVec omega = iv({1, 1});
    Rational s = slope(3, iv({2, 0}), omega, ns);
    CHECK(s == Rational::make(2, 3));
    CHECK(Rational::make(2, 3) < Rational::make(3, 4));
    CHECK(Rational::make(-4, -6) == Rational::make(2, 3));
    CHECK(Rational::make(1, -2) < Rational::make(0, 5));
    CHECK_THROWS_AS(Rational::make(1, 0), std::invalid_argument);
    CHECK(slope(2, iv({0, 0}), omega, ns) == Rational::make(0, 1));

    StabilityComparison cmp =
        stability_compare(1, iv({1, 2}), 2, iv({2, 4}), omega, ns);
    CHECK_FALSE(cmp.strictly_smaller);
    CHECK(cmp.equal);
    // mu(sub) = 0 < mu(whole) = 1: the stable strict inequality.
    StabilityComparison strict =
        stability_compare(1, iv({0, 0}), 2, iv({1, 1}), omega, ns);
    CHECK(strict.strictly_smaller);
    CHECK_FALSE(strict.equal);
}

TEST_CASE("orthogonal complement: exact pairing, right rank, integer span") {
    IntegralLattice toy = IntegralLattice::toy_rank3();
    IntVec v = iv({1, 0, 1});
    OrthComplement oc = orth_complement(v, toy);
    REQUIRE(oc.basis.cols() == 2);
    REQUIRE(oc.basis.rows() == 3);
    for (int j = 0; j < 2; ++j) {
        IntVec col = oc.basis.col(j);
        CHECK(toy.pair(v, col) == 0);
    }
    // Restricted Gram is the published diagonal form.
    IntMat expect(2, 2);
    expect << 2, 0, 0, 2;
    CHECK(oc.restricted_gram == expect);

    // Completeness over the integers: every integral solution in a small box
    // is an integer combination of the basis columns.
    for (std::int64_t x0 = -2; x0 <= 2; ++x0)
        for (std::int64_t x1 = -2; x1 <= 2; ++x1)
            for (std::int64_t x2 = -2; x2 <= 2; ++x2) {
                IntVec x = iv({x0, x1, x2});
                if (toy.pair(v, x) != 0) continue;
                Eigen::MatrixXd bd = oc.basis.cast<double>();
                Eigen::VectorXd sol =
                    bd.fullPivHouseholderQr().solve(x.cast<double>());
                IntVec c(2);
                c << std::llround(sol[0]), std::llround(sol[1]);
                CHECK((oc.basis * c - x).cwiseAbs().maxCoeff() == 0);
            }

    // Same machinery on the rank-4 extended lattice.
    IntegralLattice big = mukai_lattice(IntegralLattice::hyperbolic_U());
    IntVec w = iv({1, 0, 0, 1});
    OrthComplement oc2 = orth_complement(w, big);
    CHECK(oc2.basis.cols() == 3);
    for (int j = 0; j < 3; ++j) CHECK(big.pair(w, oc2.basis.col(j)) == 0);
}

TEST_CASE("period-domain membership on the frozen rank-3 form") {
    IntegralLattice lat;
    lat.gram = IntMat::Zero(3, 3);
    lat.gram(0, 0) = 2;
    lat.gram(1, 1) = 2;
    lat.gram(2, 2) = -2;
    CVec z = cv({cplx(1, 0), cplx(0, 1), cplx(0, 0)});
    CHECK(in_period_domain(z, lat, 1e-9));
    CHECK(in_period_domain(cplx(2.5, 0.0) * z, lat, 1e-9)); // scale invariance
    CHECK(in_period_domain(cplx(0.0, 1.75) * z, lat, 1e-9));
    CHECK_FALSE(in_period_domain(cv({cplx(1, 0), cplx(0, 0), cplx(0, 0)}), lat, 1e-9));
    CHECK_FALSE(in_period_domain(cv({cplx(0, 0), cplx(0, 0), cplx(1, 0)}), lat, 1e-9));
}

TEST_CASE("genericity search returns the first enumerated orthogonal lattice vector") {
    IntegralLattice lat;
    lat.gram = IntMat::Zero(3, 3);
    lat.gram(0, 0) = 2;
    lat.gram(1, 1) = 2;
    lat.gram(2, 2) = -2;
    CVec z = cv({cplx(1, 0), cplx(0, 1), cplx(0, 0)});
    GenericityVerdict g = is_generic_period(z, lat, 10, 1e-9);
    CHECK_FALSE(g.generic);
    CHECK(g.search_bound == 10);
    REQUIRE(g.witness.has_value());
    CHECK(*g.witness == iv({0, 0, 1}));
    // Scale invariance of the verdict.
    GenericityVerdict gs = is_generic_period(cplx(0.0, 1.75) * z, lat, 10, 1e-9);
    CHECK_FALSE(gs.generic);
    CHECK(*gs.witness == iv({0, 0, 1}));

    // Perturbing along the witness direction by an irrational amount removes
    // every witness up to the bound.
    CVec zg = z;
    zg[2] = cplx(0.1 * std::acos(-1.0), 0.0);
    GenericityVerdict g2 = is_generic_period(zg, lat, 10, 1e-9);
    CHECK(g2.generic);
    CHECK_FALSE(g2.witness.has_value());
}

TEST_CASE("projectivity witness needs a positive-square direction") {
    IntegralLattice lat3;
    lat3.gram = IntMat::Zero(3, 3);
    lat3.gram(0, 0) = 2;
    lat3.gram(1, 1) = 2;
    lat3.gram(2, 2) = -2;
    CVec z3 = cv({cplx(1, 0), cplx(0, 1), cplx(0, 0)});
    // In rank 3 the orthogonal complement of z is spanned by e3, which has
    // negative square: no witness exists at any modest bound.
    CHECK_FALSE(projectivity_witness(z3, lat3, 6, 1e-9).has_value());

    IntegralLattice lat4;
    lat4.gram = IntMat::Zero(4, 4);
    lat4.gram(0, 0) = 2;
    lat4.gram(1, 1) = 2;
    lat4.gram(2, 2) = 2;
    lat4.gram(3, 3) = -2;
    CVec z4 = cv({cplx(1, 0), cplx(0, 1), cplx(0, 0), cplx(0, 0)});
    auto ell = projectivity_witness(z4, lat4, 10, 1e-9);
    REQUIRE(ell.has_value());
    CHECK(*ell == iv({0, 0, 1, 0}));
}

TEST_CASE("sequence check reports the first normalized point off the quadric") {
    IntegralLattice lat;
    lat.gram = IntMat::Zero(3, 3);
    lat.gram(0, 0) = 2;
    lat.gram(1, 1) = 2;
    lat.gram(2, 2) = -2;
    std::vector<CVec> pts;
    for (int k = 1; k <= 6; ++k)
        pts.push_back(cv({cplx(1, 0), cplx(0, 1.0 - 1.0 / k), cplx(0, 0)}));
    SequenceDomainReport rep = sequence_domain_check(pts, lat, 1e-9, 0.5);
    CHECK_FALSE(rep.bounded_in_domain);
    // The very first point is real, so q(z, z) = 2 after normalization.
    CHECK(rep.first_violation == 1);
    CHECK(rep.min_qzzbar == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.max_qzz > 0.5);

    // A constant in-domain sequence is bounded with no violation.
    std::vector<CVec> good(4, cv({cplx(1, 0), cplx(0, 1), cplx(0, 0)}));
    SequenceDomainReport rep2 = sequence_domain_check(good, lat, 1e-9, 0.5);
    CHECK(rep2.bounded_in_domain);
    CHECK(rep2.first_violation == 0);
    CHECK(rep2.min_qzzbar == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep2.max_qzz < 1e-12);
}

} // TEST_SUITE
