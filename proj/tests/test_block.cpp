#include <doctest.h>

#include <hodgekit/block_unipotent.hpp>
#include <hodgekit/multi_index.hpp>
#include <hodgekit/rng.hpp>

using namespace hodgekit;

namespace {

Mat random_mat(Rng& rng, int r, int c) {
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = rng.normal_complex();
    return m;
}

BlockUpperUnipotent random_block(Rng& rng, int h20, int h11, int h02) {
    BlockUpperUnipotent b(h20, h11, h02);
    b.B01 = random_mat(rng, h20, h11);
    b.B02 = random_mat(rng, h20, h02);
    b.B12 = random_mat(rng, h11, h02);
    return b;
}

} // namespace

TEST_SUITE("block") {

TEST_CASE("constructor validates grading dimensions") {
    CHECK_THROWS_AS(BlockUpperUnipotent(1, 2, 3), std::invalid_argument);
    CHECK_THROWS_AS(BlockUpperUnipotent(-1, 2, -1), std::invalid_argument);
    BlockUpperUnipotent ok(2, 3, 2);
    CHECK(ok.dim() == 7);
    CHECK(ok.dense().isApprox(Mat::Identity(7, 7)));
}

TEST_CASE("dense layout places blocks at graded offsets") {
    BlockUpperUnipotent b(1, 2, 1);
    b.B01 << cplx(1, 2), cplx(3, 4);
    b.B02 << cplx(5, 6);
    b.B12 << cplx(7, 8), cplx(9, 10);
    Mat m = b.dense();
    CHECK(m(0, 1) == cplx(1, 2));
    CHECK(m(0, 2) == cplx(3, 4));
    CHECK(m(0, 3) == cplx(5, 6));
    CHECK(m(1, 3) == cplx(7, 8));
    CHECK(m(2, 3) == cplx(9, 10));
    // Strict lower part stays zero and diagonal stays one.
    CHECK(m(3, 0) == cplx(0, 0));
    CHECK(m(2, 2) == cplx(1, 0));
}

TEST_CASE("block product matches dense matrix product") {
    Rng rng(7);
    for (auto [h20, h11] : {std::pair{1, 1}, std::pair{1, 4}, std::pair{2, 3}}) {
        BlockUpperUnipotent p = random_block(rng, h20, h11, h20);
        BlockUpperUnipotent q = random_block(rng, h20, h11, h20);
        Mat lhs = block_product(p, q).dense();
        Mat rhs = p.dense() * q.dense();
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("block product rejects mismatched gradings") {
    Rng rng(8);
    BlockUpperUnipotent p = random_block(rng, 1, 2, 1);
    BlockUpperUnipotent q = random_block(rng, 1, 3, 1);
    CHECK_THROWS_AS(block_product(p, q), std::invalid_argument);
}

TEST_CASE("shape check catches manually resized blocks") {
    BlockUpperUnipotent b(1, 2, 1);
    b.B01 = Mat::Zero(1, 5);
    CHECK_THROWS_AS(b.dense(), std::invalid_argument);
}

} // TEST_SUITE
