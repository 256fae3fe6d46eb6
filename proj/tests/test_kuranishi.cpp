#include <doctest.h>

#include <hodgekit/dgla.hpp>
#include <hodgekit/kuranishi.hpp>
#include <hodgekit/torus.hpp>

#include <cmath>
#include <limits>

using namespace hodgekit;

TEST_SUITE("kuranishi") {

TEST_CASE("multi-index enumeration is graded-lexicographic, first slot slowest") {
    auto idx = multi_indices_of_degree(2, 3);
    REQUIRE(idx.size() == 4);
    CHECK(idx[0] == MultiIndex({3, 0}));
    CHECK(idx[1] == MultiIndex({2, 1}));
    CHECK(idx[2] == MultiIndex({1, 2}));
    CHECK(idx[3] == MultiIndex({0, 3}));
    CHECK(multi_indices_of_degree(3, 2).size() == 6);
}

TEST_CASE("solver rejects bad direction data") {
    TorusBackend b(2, 1, cplx(0, 1), 1.0);
    Rng rng(31);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 0) = cplx(0.3, 0.0);
    TorusForm theta = b.constant_vector01(m);
    CHECK_THROWS_AS(solve_kuranishi(b, std::vector<TorusForm>{}, 3), std::invalid_argument);
    CHECK_THROWS_AS(solve_kuranishi(b, {theta}, 0), std::invalid_argument);
    // Non-harmonic direction.
    TorusForm wiggly = b.random_vector01(rng, 1, 0.3);
    CHECK_THROWS_AS(solve_kuranishi(b, {wiggly}, 3), std::invalid_argument);
    // Linearly dependent directions.
    CHECK_THROWS_AS(solve_kuranishi(b, {theta, cplx(2.0, 0.0) * theta}, 3),
                    std::invalid_argument);
}

TEST_CASE("constant directions on the torus solve the structure equation exactly") {
    TorusBackend b(2, 1, cplx(0, 1), 1.0);
    Eigen::MatrixXcd m1 = Eigen::MatrixXcd::Zero(2, 2);
    m1(0, 0) = cplx(0.3, 0.0);
    Eigen::MatrixXcd m2 = Eigen::MatrixXcd::Zero(2, 2);
    m2(1, 1) = cplx(0.25, 0.0);
    std::vector<TorusForm> theta{b.constant_vector01(m1), b.constant_vector01(m2)};
    auto phi = solve_kuranishi(b, theta, 4);
    CHECK(phi.series.coeff.size() == 2); // the two linear coefficients only

    std::vector<cplx> t{cplx(0.2, 0.0), cplx(0.0, 0.1)};
    McResidual r = mc_residual(b, phi, t);
    CHECK(r.value < 1e-13);
    CHECK_FALSE(r.outside_radius);
    CHECK(mc_residual(b, phi, t, 0.1).outside_radius);

    auto obs = obstruction_series(b, phi);
    CHECK(obs.coeff.empty());

    auto fam = volume_family(b, phi, b.volume_base());
    CHECK(b.volume_d_norm(fam.eval(b, t)) < 1e-12);
    CHECK(wp_distance(b, fam, t) > 0.0);
    CHECK(wp_distance(b, fam, {cplx(0, 0), cplx(0, 0)}) < 1e-14);
}

TEST_CASE("obstructed instance: frozen second-order data and residual") {
    DglaBackend b(DglaData::obstructed_example());
    std::vector<DglaElement> theta{b.basis_element(1, 0)};
    auto phi = solve_kuranishi(b, theta, 3);

    const DglaElement* p2 = phi.series.get(MultiIndex({2}));
    REQUIRE(p2 != nullptr);
    CHECK(std::abs(p2->v[0]) < 1e-14);
    CHECK(std::abs(p2->v[1] - cplx(0.5, 0.0)) < 1e-14);
    CHECK(phi.series.get(MultiIndex({3})) == nullptr); // bracket of e1 with e2 vanishes

    // Single-step oracle for the first correction.
    DglaElement direct = cplx(0.5, 0.0) * b.dbar_star(b.green(b.bracket(theta[0], theta[0])));
    CHECK(b.w0_norm(*p2 - direct) < 1e-14);

    auto obs = obstruction_series(b, phi);
    const DglaElement* o2 = obs.get(MultiIndex({2}));
    REQUIRE(o2 != nullptr);
    CHECK(std::abs(o2->v[0] - cplx(0.6, 0.0)) < 1e-13);
    CHECK(std::abs(o2->v[1]) < 1e-13);

    // Residual of the truncated solution: -0.3 t^2 f1 - 0.05 t^4 f2.
    for (double t : {0.1, 0.05}) {
        double expect = std::hypot(0.3 * t * t, 0.05 * t * t * t * t);
        McResidual r = mc_residual(b, phi, {cplx(t, 0.0)});
        CHECK(r.value == doctest::Approx(expect).epsilon(1e-10));
    }
    double ratio = mc_residual(b, phi, {cplx(0.1, 0.0)}).value /
                   mc_residual(b, phi, {cplx(0.05, 0.0)}).value;
    CHECK(ratio == doctest::Approx(4.0).epsilon(1e-4)); // order-2 obstruction scaling
}

TEST_CASE("unobstructed instance: frozen coefficient chain and fifth-order residual") {
    DglaBackend b(DglaData::unobstructed_example());
    std::vector<DglaElement> theta{b.basis_element(1, 0)};
    auto phi = solve_kuranishi(b, theta, 5);
    const double expect[] = {0.5, 0.25, 0.1625, 0.11875};
    for (int k = 2; k <= 5; ++k) {
        const DglaElement* pk = phi.series.get(MultiIndex({k}));
        REQUIRE(pk != nullptr);
        CHECK(std::abs(pk->v[0]) < 1e-14);
        CHECK(std::abs(pk->v[1] - cplx(expect[k - 2], 0.0)) < 1e-13);
    }
    CHECK(obstruction_series(b, phi).coeff.empty());

    auto phi4 = solve_kuranishi(b, theta, 4);
    double r1 = mc_residual(b, phi4, {cplx(0.1, 0.0)}).value;
    double r2 = mc_residual(b, phi4, {cplx(0.05, 0.0)}).value;
    CHECK(r1 / r2 == doctest::Approx(32.0).epsilon(0.2)); // truncation order M+1 = 5
}

TEST_CASE("majorant recursion reproduces the Catalan numbers at C = x1 = 1") {
    MajorantSeries m = majorant(1.0, 1.0, 5);
    REQUIRE(m.x.size() == 6);
    CHECK(m.x[1] == doctest::Approx(1.0));
    CHECK(m.x[2] == doctest::Approx(1.0));
    CHECK(m.x[3] == doctest::Approx(2.0));
    CHECK(m.x[4] == doctest::Approx(5.0));
    CHECK(m.x[5] == doctest::Approx(14.0));
    CHECK(m.tau_threshold == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(m.radius_accepts(0.25));
    CHECK_FALSE(m.radius_accepts(0.2525)); // 1.01x the threshold
    CHECK(m.eps1_empirical > 0.0);
    CHECK(m.eps1_empirical <= m.tau_threshold + 1e-15);

    MajorantSeries free = majorant(0.0, 2.0, 3);
    CHECK(free.radius_accepts(1e9));
    CHECK(std::isinf(free.tau_threshold));

    CHECK_THROWS_AS(majorant(-1.0, 1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(majorant(1.0, 0.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(majorant(1.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("estimate suite sandwiches the linear part and honors the radius") {
    TorusBackend b(2, 1, cplx(0, 1), 1.0);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 0) = cplx(0.4, 0.0);
    std::vector<TorusForm> theta{b.constant_vector01(m)};
    auto phi = solve_kuranishi(b, theta, 3);
    auto fam = volume_family(b, phi, b.volume_base());

    std::vector<std::vector<cplx>> samples{
        {cplx(0.05, 0.0)}, {cplx(0.0, 0.1)}, {cplx(0.12, -0.05)}, {cplx(5.0, 0.0)}};
    EstimateReport rep = verify_estimates(b, phi, fam, samples, 1.0);
    CHECK(rep.skipped == 1);
    REQUIRE(rep.samples.size() == 4);
    CHECK(rep.samples[3].skipped);
    CHECK(rep.all_pass);
    CHECK(rep.harmonic_ratio == doctest::Approx(1.0).epsilon(1e-14));
    for (int k = 0; k < 3; ++k) {
        const EstimateSample& s = rep.samples[static_cast<size_t>(k)];
        CHECK(s.pass_sandwich);
        CHECK(s.pass_contraction);
        CHECK(s.pass_wp);
        CHECK(s.margin_sandwich >= 0.0);
        // Constant directions make phi equal to its linear part, so the
        // two-sided comparisons sit at ratio exactly one.
        CHECK(s.phi_c1 == doctest::Approx(s.phi1_c1).epsilon(1e-12));
    }
    CHECK(rep.eps_empirical == doctest::Approx(0.13).epsilon(1e-12)); // largest accepted |t|_1
}

TEST_CASE("volume family requires a unit-norm base") {
    DglaBackend b(DglaData::unobstructed_example());
    std::vector<DglaElement> theta{b.basis_element(1, 0)};
    auto phi = solve_kuranishi(b, theta, 2);
    DglaVolume bad = cplx(2.0, 0.0) * b.volume_base();
    CHECK_THROWS_AS(volume_family(b, phi, bad), std::invalid_argument);
}

} // TEST_SUITE
