#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace hodgekit {

using Mat = Eigen::MatrixXcd;

// Block upper-triangular matrix with identity diagonal,
//
//        [ I   B01  B02 ]
//        [ 0   I    B12 ]
//        [ 0   0    I   ]
//
// over a graded space of dimensions (h20, h11, h02) with h20 = h02. Used for
// weight-2 period data: B01 is h20 x h11, B02 is h20 x h02, B12 is h11 x h02.
struct BlockUpperUnipotent {
    int h20 = 0, h11 = 0, h02 = 0;
    Mat B01, B02, B12;

    BlockUpperUnipotent() = default;
    BlockUpperUnipotent(int h20_, int h11_, int h02_) : h20(h20_), h11(h11_), h02(h02_) {
        // Validate before the Eigen allocations: negative extents must raise
        // invalid_argument, not whatever Eigen turns them into.
        if (h20_ < 0 || h11_ < 0 || h02_ < 0 || h20_ != h02_)
            throw std::invalid_argument("BlockUpperUnipotent: need h20 = h02 >= 0, h11 >= 0");
        B01 = Mat::Zero(h20_, h11_);
        B02 = Mat::Zero(h20_, h02_);
        B12 = Mat::Zero(h11_, h02_);
    }

    void check_shapes() const {
        if (B01.rows() != h20 || B01.cols() != h11 || B02.rows() != h20 || B02.cols() != h02 ||
            B12.rows() != h11 || B12.cols() != h02)
            throw std::invalid_argument("BlockUpperUnipotent: block shape mismatch");
    }

    int dim() const { return h20 + h11 + h02; }

    // Dense (h20+h11+h02)^2 realization; primarily for oracles and reports.
    Mat dense() const {
        check_shapes();
        Mat m = Mat::Identity(dim(), dim());
        m.block(0, h20, h20, h11) = B01;
        m.block(0, h20 + h11, h20, h02) = B02;
        m.block(h20, h20 + h11, h11, h02) = B12;
        return m;
    }
};

// Group product of two unipotent blocks: only the corner picks up a
// second-order term, C02 = P02 + Q02 + P01*Q12.
inline BlockUpperUnipotent block_product(const BlockUpperUnipotent& p,
                                         const BlockUpperUnipotent& q) {
    if (p.h20 != q.h20 || p.h11 != q.h11 || p.h02 != q.h02)
        throw std::invalid_argument("block_product: dimension mismatch");
    p.check_shapes();
    q.check_shapes();
    BlockUpperUnipotent c(p.h20, p.h11, p.h02);
    c.B01 = p.B01 + q.B01;
    c.B12 = p.B12 + q.B12;
    c.B02 = p.B02 + q.B02 + p.B01 * q.B12;
    return c;
}

} // namespace hodgekit
