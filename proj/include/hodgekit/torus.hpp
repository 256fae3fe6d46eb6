#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "hodgekit/multi_index.hpp"
#include "hodgekit/rng.hpp"

namespace hodgekit {

// Norm bundle for a single form:
//   c0      - max over components of the sup of |coefficient function| on the
//             sampling grid (4 points per highest mode per real dimension)
//   sup_op  - sup over the grid of the largest singular value of the
//             coefficient matrix (vector-valued (0,1)-forms; equals c0 for
//             other shapes, where no matrix structure exists)
//   w0      - L^2 norm, exact via the Parseval sum over Fourier coefficients
//   c1      - grid C^1 norm: c0 plus the sup of every first z / z-bar
//             derivative, derivatives taken spectrally
struct NormReport {
    double c0 = 0.0;
    double sup_op = 0.0;
    double w0 = 0.0;
    double c1 = 0.0;
    bool band_clipped = false;
};

struct ProbeReport {
    double constant = 0.0;      // sup over samples of ||(1/2) dbar* G [phi,psi]|| / (||phi|| ||psi||)
    int samples = 0;
    int skipped = 0;            // zero-norm samples skipped by the division guard
};

// Spectral form on a flat complex torus (C / (Z + tau Z))^d. Coefficient
// functions are trigonometric polynomials indexed by dual-lattice modes
// mu in Z^{2d} with ||mu||_inf <= K (the first d slots pair with the x
// periods, the last d with the y periods; z_j = x_j + tau y_j).
//
// Two shapes share this container:
//   vector_valued = true : (0,q)-form with values in T^{1,0}; components
//                          phi^i_J for i in {0..d-1} and |J| = q
//   vector_valued = false: scalar (p,q)-form with components w_{I,J}
// Component multi-indices I, J are strictly increasing and stored as
// bitmasks; comp[slot] is the dense mode array of one component.
struct TorusForm {
    int d = 0;
    int K = 0;
    bool vector_valued = false;
    int p = 0; // 0 for vector-valued forms
    int q = 0;
    bool band_clipped = false; // set when a product ran past the backend band limit
    std::vector<Eigen::VectorXcd> comp;

    int side() const { return 2 * K + 1; }
    std::int64_t modes() const {
        std::int64_t s = 1;
        for (int a = 0; a < 2 * d; ++a) s *= side();
        return s;
    }
    bool same_shape(const TorusForm& o) const {
        return d == o.d && vector_valued == o.vector_valued && p == o.p && q == o.q;
    }
    double max_abs_coeff() const;
    bool is_zero(double tol = 0.0) const { return max_abs_coeff() <= tol; }
};

TorusForm operator+(const TorusForm& a, const TorusForm& b);
TorusForm operator-(const TorusForm& a, const TorusForm& b);
TorusForm operator*(cplx s, const TorusForm& f);

// Sum of scalar forms of distinct (p,q) types (orthogonal in L^2); the shape
// taken by the holomorphic-volume family e^{phi} _| Omega_0, whose k-th
// contraction depth lives in type (d-k, k).
struct TorusMixedForm {
    std::map<std::pair<int, int>, TorusForm> parts;

    TorusMixedForm& accumulate(const TorusForm& f);
};
TorusMixedForm operator+(const TorusMixedForm& a, const TorusMixedForm& b);
TorusMixedForm operator-(const TorusMixedForm& a, const TorusMixedForm& b);
TorusMixedForm operator*(cplx s, const TorusMixedForm& f);

// Dolbeault operator calculus on the flat torus, spectral throughout.
// The metric is g0 * sum_j dz_j (x) dzbar_j with g0 chosen so the total
// volume equals `volume`; every operator below is exact on the modes it
// keeps. Products (bracket, contraction) are exact mode convolutions --
// equivalent to a fully dealiased pseudo-spectral product -- and grow the
// cutoff of the result up to the band limit 2K; results that would need
// modes beyond the band are truncated and flagged, never silently.
class TorusBackend {
public:
    using Form = TorusForm;
    using Volume = TorusMixedForm;

    TorusBackend(int d, int K, cplx tau, double volume);

    int dim() const { return d_; }
    int cutoff() const { return K_; }
    int band_limit() const { return band_limit_; }
    cplx tau() const { return tau_; }
    double volume() const { return volume_; }
    double metric_coeff() const { return g0_; }

    // --- constructors for forms -------------------------------------------
    TorusForm zero_vector_form(int q, int Kf = 0) const;
    TorusForm zero_scalar_form(int p, int q, int Kf = 0) const;
    // Constant (0,1) vector form with coefficient matrix phi^i_j = m(i, j).
    TorusForm constant_vector01(const Eigen::MatrixXcd& m) const;
    // Beltrami coefficient of the same complex structure as
    // constant_vector01(m), re-expressed through the shear diffeomorphism
    // (z1, z2) -> (z1 + eps * f, z2), where f is the single Fourier mode
    // mu = (m1, m2, n1, n2) supported on the second coordinate pair
    // (m1 = n1 = 0, mu != 0). The shear is isotopic to the identity, so
    // this form and constant_vector01(m) represent the same deformed
    // structure and must map to identical period blocks. Requires
    // dim() == 2 and m(1, 0) == 0, which keeps the pulled-back coefficient
    // closed-form: the base matrix plus a two-mode correction in the
    // (i, j) = (0, 1) component.
    TorusForm sheared_vector01(const Eigen::MatrixXcd& m, const std::vector<int>& mu,
                               double eps) const;
    // Normalized constant holomorphic volume form (||.||_{L^2} = 1).
    TorusForm volume_form() const;
    // The d^2 constant forms dz_i (x) dzbar_j spanning the harmonic
    // (0,1) vector forms.
    std::vector<TorusForm> harmonic_vector01_basis() const;
    // Random (0,1) vector form: f(z) * M with f a random unit-sup trig
    // polynomial at cutoff Kf and M a random matrix dominated by its top
    // singular direction, rescaled so the sup operator norm equals `target`.
    TorusForm random_vector01(Rng& rng, int Kf, double target_sup) const;
    // Random scalar (p,q) form with decaying random modes (for operator tests).
    TorusForm random_scalar(Rng& rng, int p, int q, int Kf) const;
    TorusForm random_vector(Rng& rng, int q, int Kf) const;

    // --- linear operators (mode-diagonal) ---------------------------------
    TorusForm dbar(const TorusForm& f) const;
    TorusForm dbar_star(const TorusForm& f) const;
    TorusForm laplacian(const TorusForm& f) const; // composed, not shortcut
    TorusForm green(const TorusForm& f) const;
    TorusForm harmonic_project(const TorusForm& f) const;
    TorusForm del(const TorusForm& f) const; // holomorphic differential (scalar forms)
    // T = dbar_star o G o del, the correction operator of the quasi-period map.
    TorusForm t_operator(const TorusForm& omega) const;

    // --- bilinear operations (exact convolutions) -------------------------
    // Graded bracket [phi,psi] of T^{1,0}-valued (0,p)/(0,q) forms.
    TorusForm bracket(const TorusForm& phi, const TorusForm& psi) const;
    // Contraction i_phi omega of a (0,1) vector form into a scalar (p,q) form.
    TorusForm contract(const TorusForm& phi01, const TorusForm& omega) const;

    // --- metrics, norms, pairings -----------------------------------------
    cplx inner(const TorusForm& a, const TorusForm& b) const;
    double w0_norm(const TorusForm& f) const;
    NormReport norms(const TorusForm& f) const;
    double harmonic_norm_ratio() const;
    // Poincare pairing  integral of a ^ b  (scalar forms, exact).
    cplx wedge_integral(const TorusForm& a, const TorusForm& b) const;

    ProbeReport operator_norm_probe(int samples, Rng& rng) const;
    std::vector<std::string> validate(Rng& rng) const;

    // --- volume-family support --------------------------------------------
    TorusMixedForm volume_base() const;
    TorusMixedForm contract_volume(const TorusForm& phi01, const TorusMixedForm& w) const;
    double volume_norm(const TorusMixedForm& w) const;
    // ||d w|| with d = del + dbar, for closedness checks of the family.
    double volume_d_norm(const TorusMixedForm& w) const;
    double contract_depth_cap() const { return d_; }

    // Symbols of d/dz_j and d/dzbar_j on mode mu (exposed for oracles).
    cplx del_symbol(const std::vector<int>& mu, int j) const;
    cplx dbar_symbol(const std::vector<int>& mu, int j) const;
    double laplace_eigenvalue(const std::vector<int>& mu) const;

    // Evaluate one component of a form on the uniform sampling grid
    // (n points per real dimension); used by norms and by grid oracles.
    Eigen::VectorXcd component_on_grid(const TorusForm& f, int slot, int n_per_dim) const;
    // Pointwise evaluation of one component at coordinates (x, y) in [0,1)^{2d}.
    cplx component_at(const TorusForm& f, int slot, const std::vector<double>& xy) const;

    int scalar_slot(int d, std::uint32_t maskI, std::uint32_t maskJ, int p, int q) const;
    int vector_slot(int i, std::uint32_t maskJ, int q) const;

private:
    int d_;
    int K_;
    int band_limit_;
    cplx tau_;
    double volume_;
    double g0_;
};

} // namespace hodgekit
