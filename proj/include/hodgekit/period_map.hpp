#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "hodgekit/block_unipotent.hpp"
#include "hodgekit/rng.hpp"
#include "hodgekit/torus.hpp"

namespace hodgekit {

// Adapted orthonormal harmonic frame for a weight-2 structure: bases for the
// (2,0), (1,1) and (0,2) pieces plus the wedge-integration pairing Q on
// their concatenated span. Torus-backed frames carry the actual forms.
struct HodgeFrame {
    int h20 = 0;
    int h11 = 0;
    int h02 = 0;
    std::vector<TorusForm> eta20, eta11, eta02;
    Eigen::MatrixXcd Q; // (h20+h11+h02)^2 pairing matrix; empty if unavailable

    int dim() const { return h20 + h11 + h02; }
};

// Frame of constant forms on a torus backend, W0-orthonormalized.
// The pairing Q (integral of the wedge) is filled in complex dimension 2,
// where two 2-forms wedge to a top form.
HodgeFrame make_torus_frame(const TorusBackend& backend);

// Gram-matrix identity check and harmonicity check; returns violations.
std::vector<std::string> validate_frame(const TorusBackend& backend, const HodgeFrame& frame);

// Quasi-period blocks of a Beltrami form against a frame. For each frame
// element eta of type (2,0) or (1,1), resolves rho = (I + T i_phi)^{-1} eta
// by Neumann iteration (update tolerance 1e-12, at most 200 steps) and reads
// the harmonic components of the contractions:
//   row of Phi01: H(i_phi rho) against eta11     (from eta20 rows)
//   row of Phi02: (1/2) H(i_phi i_phi rho) against eta02
//   row of Phi12: H(i_phi rho') against eta02    (from eta11 rows)
// Requires the sup operator norm of phi to be < 1; a non-convergent
// iteration raises with the observed contraction estimate.
BlockUpperUnipotent quasi_period(const TorusBackend& backend, const HodgeFrame& frame,
                                 const TorusForm& phi);

// Max-entry norm of the Griffiths-transversality residual
//   d/dt Phi02 - (d/dt Phi01) * Phi12
// along a sampled block curve, by central differences with step h.
double transversality_check(const std::function<BlockUpperUnipotent(double)>& curve, double t,
                            double h);

// Determinant of [[I, B01, B02], [0, I, B12], [conj B02, conj B01, I]]
// via two block-row eliminations; nonzero exactly when the filtration the
// blocks describe is a pure Hodge structure.
cplx purity_determinant(const BlockUpperUnipotent& blocks);

// Samples blocks at a prescribed Beltrami size r (drawing the forms or the
// block entries, depending on the frame realization).
using BlockSampler = std::function<BlockUpperUnipotent(double r, Rng& rng)>;

// Torus realization: random Beltrami forms of sup operator norm r, blocks by
// quasi_period.
BlockSampler block_sampler_torus(const TorusBackend& backend, const HodgeFrame& frame);

// Abstract realization for bare Hodge numbers: random unit-normalized block
// matrices scaled to the envelope r/(1-r) for the adjacent blocks and
// r^2/(1-r) for the far block (the shape of the proven block bounds).
BlockSampler block_sampler_envelope(int h20, int h11, int h02);

struct StabilityRadiusReport {
    double radius = 0.0;      // largest r with no purity failure among samples
    bool saturated = false;   // hit the bisection cap
    double cap = 0.99;
    int trials = 0;
    double worst_det = 0.0;   // smallest |det| observed at the returned radius
};

// Bisection over r in (0, cap): largest r such that `trials` sampled blocks
// at size r all keep |purity_determinant| >= pd_margin.
StabilityRadiusReport stability_radius(const BlockSampler& sampler, int trials, Rng& rng,
                                       double pd_margin, double cap = 0.99);

} // namespace hodgekit
