#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "hodgekit/block_unipotent.hpp"
#include "hodgekit/period_map.hpp"
#include "hodgekit/rng.hpp"

namespace hodgekit {

// Coordinates of a real (1,1)-class in the eta_(1) frame. When the frame is
// a d x d matrix frame (h11 = d^2), reality of the class is the Hermitian
// symmetry of the reshaped coefficient matrix, checked on construction.
struct KahlerSeed {
    Eigen::RowVectorXcd alpha10;
    bool reality_checked = false;

    static KahlerSeed from_matrix(const Eigen::MatrixXcd& m, double tol = 1e-12);
    static KahlerSeed from_row(Eigen::RowVectorXcd row); // reality declared by caller
};

Eigen::MatrixXcd transport_A(const BlockUpperUnipotent& blocks); // Phi02 - Phi01 * Phi12

struct TransportState {
    Eigen::RowVectorXcd alpha0;
    BlockUpperUnipotent blocks;
    Eigen::MatrixXcd A;
    Eigen::MatrixXcd J; // [[I, -A], [-conj A, I]], the complexified Jacobian

    std::vector<std::string> validate(double tol = 1e-13) const;
};

// F(alpha0) = conj(alpha0) - alpha10 * Phi12 - alpha0 * A.
Eigen::RowVectorXcd residual_F(const Eigen::RowVectorXcd& alpha0,
                               const BlockUpperUnipotent& blocks, const KahlerSeed& seed);

// Unique solution of F = 0 through the realified 2h20 x 2h20 system in
// (Re alpha0, Im alpha0). Requires spectral norm of A below one; the error
// message carries the violated bound.
TransportState solve_alpha0(const BlockUpperUnipotent& blocks, const KahlerSeed& seed);

struct PathSample {
    double t = 0.0;
    Eigen::RowVectorXcd alpha0;
    double a_norm = 0.0;  // spectral norm of A at this sample
    bool refined = false; // inserted by local step halving near the guard
};

struct PathReport {
    std::vector<PathSample> samples;
    bool truncated = false;
    int truncation_index = -1;       // base-grid index of the first ||A|| >= 1 sample
    double sup_alpha0 = 0.0;         // sup of ||alpha0|| along the path
    double sup_a_norm = 0.0;
    double certificate_bound = 0.0;  // sup||alpha10*Phi12|| / (1 - sup||A||)
    bool certificate_ok = false;     // sup_alpha0 <= certificate_bound + 1e-9
};

// Predictor-corrector continuation of alpha0 along a sampled block curve on
// t in [0, 1] with `steps` base intervals. The corrector is the exact linear
// solve; steps are halved (up to 6 levels, recorded as refined samples) when
// the guard quantity ||A|| exceeds 0.95, and the path is truncated at the
// first base sample where ||A|| >= 1.
PathReport continue_path(const std::function<BlockUpperUnipotent(double)>& curve,
                         const KahlerSeed& seed, int steps);

struct TransportedClass {
    Eigen::RowVectorXcd c20, c11, c02; // coefficients over (eta20, eta11, eta02)
    bool reality_exact = false;        // c02 == conj(c20) by construction
};

TransportedClass transported_class(const Eigen::RowVectorXcd& alpha0, const KahlerSeed& seed);

// (I - S)^{-1} g for S(G) = conj(phi)^T G^T phi, by the geometric series with
// tail below 1e-14; Hermitian by final symmetrization, positive definite
// whenever g is. Refuses sigma_max(phi) >= 1.
Eigen::MatrixXcd metric_update(const Eigen::MatrixXcd& g, const Eigen::MatrixXcd& phi);

struct MetricField {
    std::vector<Eigen::MatrixXcd> g;   // one Hermitian matrix per grid point
    std::vector<Eigen::MatrixXcd> phi; // companion deformation matrices (optional)
};

struct PositivityReport {
    bool positive = false;
    double worst_margin = 0.0; // minimum eigenvalue over the grid
    int worst_index = -1;
};

PositivityReport positivity_check(const MetricField& field);

struct StabilityRegionReport {
    double c2 = 0.0;        // largest r with ||A|| < 1 on all samples
    bool c2_saturated = false;
    double c1 = 0.0;        // purity radius from the same sampler
    double c0 = 0.0;        // min(c1, c2, 1)
    bool solves_at_c0 = false;
    int trials = 0;
};

// Empirical region constants from a block sampler: c2 by bisection on the
// guard ||A|| < 1, c1 from stability_radius, c0 their minimum capped at 1,
// plus a final sweep checking solve_alpha0 succeeds for all trials just
// inside the region (at 95% of c0 -- the boundary itself is an empirical
// sup, so fresh draws exactly there may cross the guard).
StabilityRegionReport stability_region_probe(const BlockSampler& sampler, const KahlerSeed& seed,
                                             int trials, Rng& rng, double pd_margin,
                                             double cap = 0.99);

} // namespace hodgekit
