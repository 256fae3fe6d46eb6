#include "hodgekit/torus.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hodgekit/subsets.hpp"

namespace hodgekit {

namespace {

constexpr double kPi = std::numbers::pi;

// Flat layout of the mode box [-K, K]^{2d}: axis 0 fastest.
struct ModeBox {
    int twod;
    int K;
    int side;
    explicit ModeBox(int twod_, int K_) : twod(twod_), K(K_), side(2 * K_ + 1) {}
    std::int64_t size() const {
        std::int64_t s = 1;
        for (int a = 0; a < twod; ++a) s *= side;
        return s;
    }
    std::int64_t encode(const std::vector<int>& mu) const {
        std::int64_t f = 0;
        for (int a = twod - 1; a >= 0; --a) f = f * side + (mu[a] + K);
        return f;
    }
    void decode(std::int64_t f, std::vector<int>& mu) const {
        mu.resize(twod);
        for (int a = 0; a < twod; ++a) {
            mu[a] = static_cast<int>(f % side) - K;
            f /= side;
        }
    }
    bool contains(const std::vector<int>& mu) const {
        for (int v : mu)
            if (v < -K || v > K) return false;
        return true;
    }
};

std::vector<std::pair<std::vector<int>, cplx>> nonzero_modes(const TorusForm& f, int slot) {
    std::vector<std::pair<std::vector<int>, cplx>> out;
    ModeBox box(2 * f.d, f.K);
    std::vector<int> mu;
    const Eigen::VectorXcd& c = f.comp[slot];
    for (std::int64_t i = 0; i < c.size(); ++i) {
        if (c[i] != cplx(0.0, 0.0)) {
            box.decode(i, mu);
            out.emplace_back(mu, c[i]);
        }
    }
    return out;
}

// Grow (or keep) the mode box of a form; contents are preserved exactly.
TorusForm embed(const TorusForm& f, int Knew) {
    if (Knew == f.K) return f;
    if (Knew < f.K) throw std::logic_error("embed: cannot shrink mode box");
    TorusForm out = f;
    out.K = Knew;
    ModeBox src(2 * f.d, f.K), dst(2 * f.d, Knew);
    std::vector<int> mu;
    for (std::size_t s = 0; s < f.comp.size(); ++s) {
        Eigen::VectorXcd big = Eigen::VectorXcd::Zero(dst.size());
        for (std::int64_t i = 0; i < f.comp[s].size(); ++i) {
            if (f.comp[s][i] == cplx(0.0, 0.0)) continue;
            src.decode(i, mu);
            big[dst.encode(mu)] = f.comp[s][i];
        }
        out.comp[s] = std::move(big);
    }
    return out;
}

// c(mu) <- c(mu) * f(mu), mode-diagonal scalar multiplier on one component.
template <class F>
Eigen::VectorXcd mode_multiply(const Eigen::VectorXcd& c, const ModeBox& box, F&& f) {
    Eigen::VectorXcd out(c.size());
    std::vector<int> mu;
    for (std::int64_t i = 0; i < c.size(); ++i) {
        if (c[i] == cplx(0.0, 0.0)) {
            out[i] = 0.0;
            continue;
        }
        box.decode(i, mu);
        out[i] = c[i] * f(mu);
    }
    return out;
}

// Exact convolution of two mode arrays into a box of cutoff Kout.
// Returns true in *clipped if any product mode fell outside the output box.
void convolve_into(const std::vector<std::pair<std::vector<int>, cplx>>& a,
                   const std::vector<std::pair<std::vector<int>, cplx>>& b, cplx scale,
                   Eigen::VectorXcd& out, const ModeBox& obox, bool* clipped) {
    if (scale == cplx(0.0, 0.0)) return;
    std::vector<int> mu(obox.twod);
    for (const auto& [ma, ca] : a) {
        for (const auto& [mb, cb] : b) {
            bool inside = true;
            for (int t = 0; t < obox.twod; ++t) {
                mu[t] = ma[t] + mb[t];
                if (mu[t] < -obox.K || mu[t] > obox.K) inside = false;
            }
            if (!inside) {
                *clipped = true;
                continue;
            }
            out[obox.encode(mu)] += scale * ca * cb;
        }
    }
}

std::vector<cplx> axis_transform(const std::vector<cplx>& in, std::vector<int>& dims, int axis,
                                 const Eigen::MatrixXcd& F) {
    const int n_in = dims[axis];
    const int n_out = static_cast<int>(F.rows());
    std::int64_t stride = 1;
    for (int a = 0; a < axis; ++a) stride *= dims[a];
    std::int64_t total = 1;
    for (int x : dims) total *= x;
    const std::int64_t outer = total / (stride * n_in);
    std::vector<cplx> out(static_cast<std::size_t>(total / n_in * n_out));
    for (std::int64_t o = 0; o < outer; ++o) {
        for (std::int64_t inn = 0; inn < stride; ++inn) {
            for (int g = 0; g < n_out; ++g) {
                cplx acc = 0.0;
                for (int mi = 0; mi < n_in; ++mi)
                    acc += F(g, mi) * in[static_cast<std::size_t>(inn + stride * (mi + static_cast<std::int64_t>(n_in) * o))];
                out[static_cast<std::size_t>(inn + stride * (g + static_cast<std::int64_t>(n_out) * o))] = acc;
            }
        }
    }
    dims[axis] = n_out;
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// TorusForm arithmetic
// ---------------------------------------------------------------------------

double TorusForm::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& c : comp)
        if (c.size() > 0) m = std::max(m, c.cwiseAbs().maxCoeff());
    return m;
}

TorusForm operator+(const TorusForm& a, const TorusForm& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("form addition: mismatched shapes");
    int Kn = std::max(a.K, b.K);
    TorusForm x = embed(a, Kn), y = embed(b, Kn);
    for (std::size_t s = 0; s < x.comp.size(); ++s) x.comp[s] += y.comp[s];
    x.band_clipped = a.band_clipped || b.band_clipped;
    return x;
}

TorusForm operator-(const TorusForm& a, const TorusForm& b) { return a + (cplx(-1.0, 0.0) * b); }

TorusForm operator*(cplx s, const TorusForm& f) {
    TorusForm out = f;
    for (auto& c : out.comp) c *= s;
    return out;
}

TorusMixedForm& TorusMixedForm::accumulate(const TorusForm& f) {
    auto key = std::make_pair(f.p, f.q);
    auto it = parts.find(key);
    if (it == parts.end())
        parts.emplace(key, f);
    else
        it->second = it->second + f;
    return *this;
}

TorusMixedForm operator+(const TorusMixedForm& a, const TorusMixedForm& b) {
    TorusMixedForm out = a;
    for (const auto& [k, f] : b.parts) out.accumulate(f);
    return out;
}

TorusMixedForm operator-(const TorusMixedForm& a, const TorusMixedForm& b) {
    return a + (cplx(-1.0, 0.0) * b);
}

TorusMixedForm operator*(cplx s, const TorusMixedForm& f) {
    TorusMixedForm out = f;
    for (auto& [k, part] : out.parts) part = s * part;
    return out;
}

// ---------------------------------------------------------------------------
// Backend
// ---------------------------------------------------------------------------

TorusBackend::TorusBackend(int d, int K, cplx tau, double volume)
    : d_(d), K_(K), band_limit_(2 * K), tau_(tau), volume_(volume) {
    if (d < 1 || d > 4) throw std::invalid_argument("torus dimension must be in 1..4");
    if (K < 0) throw std::invalid_argument("mode cutoff must be nonnegative");
    if (tau.imag() <= 0.0) throw std::invalid_argument("tau must lie in the upper half plane");
    if (!(volume > 0.0)) throw std::invalid_argument("volume must be positive");
    g0_ = std::pow(volume, 1.0 / d) / tau.imag();
}

cplx TorusBackend::del_symbol(const std::vector<int>& mu, int j) const {
    // d/dz_j of exp(2 pi i (m.x + n.y)) with z = x + tau y.
    double m = mu[j], n = mu[d_ + j];
    return kPi / tau_.imag() * (cplx(n, 0.0) - std::conj(tau_) * m);
}

cplx TorusBackend::dbar_symbol(const std::vector<int>& mu, int j) const {
    double m = mu[j], n = mu[d_ + j];
    return kPi / tau_.imag() * (tau_ * m - cplx(n, 0.0));
}

double TorusBackend::laplace_eigenvalue(const std::vector<int>& mu) const {
    double s = 0.0;
    for (int j = 0; j < d_; ++j) s += std::norm(dbar_symbol(mu, j));
    return s / g0_;
}

int TorusBackend::vector_slot(int i, std::uint32_t maskJ, int q) const {
    auto subs = subsets_of_size(d_, q);
    return i * static_cast<int>(subs.size()) + subset_position(subs, maskJ);
}

int TorusBackend::scalar_slot(int /*d*/, std::uint32_t maskI, std::uint32_t maskJ, int p, int q) const {
    auto subI = subsets_of_size(d_, p);
    auto subJ = subsets_of_size(d_, q);
    return subset_position(subI, maskI) * static_cast<int>(subJ.size()) +
           subset_position(subJ, maskJ);
}

TorusForm TorusBackend::zero_vector_form(int q, int Kf) const {
    TorusForm f;
    f.d = d_;
    f.K = Kf;
    f.vector_valued = true;
    f.p = 0;
    f.q = q;
    ModeBox box(2 * d_, Kf);
    f.comp.assign(static_cast<std::size_t>(d_ * binom(d_, q)), Eigen::VectorXcd::Zero(box.size()));
    return f;
}

TorusForm TorusBackend::zero_scalar_form(int p, int q, int Kf) const {
    TorusForm f;
    f.d = d_;
    f.K = Kf;
    f.vector_valued = false;
    f.p = p;
    f.q = q;
    ModeBox box(2 * d_, Kf);
    f.comp.assign(static_cast<std::size_t>(binom(d_, p) * binom(d_, q)),
                  Eigen::VectorXcd::Zero(box.size()));
    return f;
}

TorusForm TorusBackend::constant_vector01(const Eigen::MatrixXcd& m) const {
    if (m.rows() != d_ || m.cols() != d_)
        throw std::invalid_argument("constant_vector01: coefficient matrix must be d x d");
    TorusForm f = zero_vector_form(1, 0);
    ModeBox box(2 * d_, 0);
    std::vector<int> zero(2 * d_, 0);
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j)
            f.comp[vector_slot(i, 1u << j, 1)][box.encode(zero)] = m(i, j);
    return f;
}

TorusForm TorusBackend::sheared_vector01(const Eigen::MatrixXcd& m, const std::vector<int>& mu,
                                         double eps) const {
    if (d_ != 2) throw std::invalid_argument("sheared_vector01: torus dimension must be 2");
    if (m.rows() != 2 || m.cols() != 2)
        throw std::invalid_argument("sheared_vector01: coefficient matrix must be 2 x 2");
    if (std::abs(m(1, 0)) != 0.0)
        throw std::invalid_argument(
            "sheared_vector01: m(1, 0) must vanish (the shear pullback is closed-form only then)");
    if (mu.size() != 4 || mu[0] != 0 || mu[2] != 0)
        throw std::invalid_argument(
            "sheared_vector01: mode must be supported on the second coordinate pair");
    if (mu[1] == 0 && mu[3] == 0)
        throw std::invalid_argument("sheared_vector01: mode must be nonzero");

    int Kf = std::max(std::abs(mu[1]), std::abs(mu[3]));
    TorusForm f = zero_vector_form(1, Kf);
    ModeBox box(2 * d_, Kf);
    std::vector<int> zero(2 * d_, 0);
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j)
            f.comp[vector_slot(i, 1u << j, 1)][box.encode(zero)] = m(i, j);

    // Holomorphic coordinates of the base structure are w_i = z_i + (m zbar)_i;
    // composing with the shear and renormalizing the coframe to the shape
    // dz + phi dzbar moves the whole correction into the (0, 1) component:
    //   phi^0_1 += eps * (f_zbar2 + m00 conj(f_z2)) - eps * (f_z2 + m00 conj(f_zbar2)) * m11.
    cplx s_del = del_symbol(mu, 1);
    cplx s_dbar = dbar_symbol(mu, 1);
    cplx at_plus = eps * (s_dbar - m(1, 1) * s_del);
    cplx at_minus = eps * m(0, 0) * (std::conj(s_del) - m(1, 1) * std::conj(s_dbar));
    std::vector<int> neg = mu;
    for (int& v : neg) v = -v;
    auto& c = f.comp[vector_slot(0, 1u << 1, 1)];
    c[box.encode(mu)] += at_plus;
    c[box.encode(neg)] += at_minus;
    return f;
}

TorusForm TorusBackend::volume_form() const {
    TorusForm f = zero_scalar_form(d_, 0, 0);
    ModeBox box(2 * d_, 0);
    std::vector<int> zero(2 * d_, 0);
    double c = std::pow(g0_, d_ / 2.0) / std::sqrt(volume_);
    f.comp[0][box.encode(zero)] = c;
    return f;
}

std::vector<TorusForm> TorusBackend::harmonic_vector01_basis() const {
    std::vector<TorusForm> out;
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) {
            Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d_, d_);
            m(i, j) = 1.0;
            out.push_back(constant_vector01(m));
        }
    return out;
}

TorusForm TorusBackend::random_scalar(Rng& rng, int p, int q, int Kf) const {
    TorusForm f = zero_scalar_form(p, q, Kf);
    ModeBox box(2 * d_, Kf);
    std::vector<int> mu;
    for (auto& c : f.comp)
        for (std::int64_t i = 0; i < c.size(); ++i) {
            box.decode(i, mu);
            double n2 = 0.0;
            for (int v : mu) n2 += static_cast<double>(v) * v;
            c[i] = rng.normal_complex() / (1.0 + n2);
        }
    return f;
}

TorusForm TorusBackend::random_vector(Rng& rng, int q, int Kf) const {
    TorusForm f = zero_vector_form(q, Kf);
    ModeBox box(2 * d_, Kf);
    std::vector<int> mu;
    for (auto& c : f.comp)
        for (std::int64_t i = 0; i < c.size(); ++i) {
            box.decode(i, mu);
            double n2 = 0.0;
            for (int v : mu) n2 += static_cast<double>(v) * v;
            c[i] = rng.normal_complex() / (1.0 + n2);
        }
    return f;
}

TorusForm TorusBackend::random_vector01(Rng& rng, int Kf, double target_sup) const {
    // Scalar profile times a fixed matrix whose top singular value dominates,
    // so the pointwise operator norm tracks the profile closely.
    Eigen::VectorXcd u(d_), v(d_);
    for (int i = 0; i < d_; ++i) {
        u[i] = rng.normal_complex();
        v[i] = rng.normal_complex();
    }
    u.normalize();
    v.normalize();
    Eigen::MatrixXcd m = u * v.adjoint();
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) m(i, j) += 0.05 * rng.normal_complex();

    TorusForm f = zero_vector_form(1, Kf);
    ModeBox box(2 * d_, Kf);
    Eigen::VectorXcd profile = Eigen::VectorXcd::Zero(box.size());
    std::vector<int> mu;
    for (std::int64_t i = 0; i < profile.size(); ++i) {
        box.decode(i, mu);
        double n2 = 0.0;
        for (int val : mu) n2 += static_cast<double>(val) * val;
        profile[i] = rng.normal_complex() / (1.0 + 2.0 * n2);
    }
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) f.comp[vector_slot(i, 1u << j, 1)] = m(i, j) * profile;
    NormReport nr = norms(f);
    if (nr.sup_op > 0.0) f = cplx(target_sup / nr.sup_op, 0.0) * f;
    return f;
}

// ---------------------------------------------------------------------------
// Linear operators
// ---------------------------------------------------------------------------

TorusForm TorusBackend::dbar(const TorusForm& f) const {
    TorusForm out = f.vector_valued ? zero_vector_form(f.q + 1, f.K)
                                    : zero_scalar_form(f.p, f.q + 1, f.K);
    out.band_clipped = f.band_clipped;
    if (out.comp.empty()) return out;
    ModeBox box(2 * d_, f.K);
    const double cross = (f.p % 2 == 0) ? 1.0 : -1.0; // dzbar_j passes the dz block
    auto subJ = subsets_of_size(d_, f.q);
    auto subI = subsets_of_size(d_, f.p);
    const int nI = f.vector_valued ? d_ : static_cast<int>(subI.size());
    for (int a = 0; a < nI; ++a) {
        for (std::size_t jj = 0; jj < subJ.size(); ++jj) {
            const std::uint32_t J = subJ[jj];
            const int slot_in = a * static_cast<int>(subJ.size()) + static_cast<int>(jj);
            for (int j = 0; j < d_; ++j) {
                int sgn = insert_sign(J, j);
                if (sgn == 0) continue;
                int slot_out = f.vector_valued
                                   ? vector_slot(a, J | (1u << j), f.q + 1)
                                   : scalar_slot(d_, subI[a], J | (1u << j), f.p, f.q + 1);
                out.comp[slot_out] += mode_multiply(f.comp[slot_in], box, [&](const std::vector<int>& mu) {
                    return cross * static_cast<double>(sgn) * dbar_symbol(mu, j);
                });
            }
        }
    }
    return out;
}

TorusForm TorusBackend::dbar_star(const TorusForm& f) const {
    TorusForm out = f.vector_valued ? zero_vector_form(f.q - 1, f.K)
                                    : zero_scalar_form(f.p, f.q - 1, f.K);
    out.band_clipped = f.band_clipped;
    if (out.comp.empty() || f.comp.empty()) return out;
    ModeBox box(2 * d_, f.K);
    const double cross = (f.p % 2 == 0) ? 1.0 : -1.0;
    auto subJ = subsets_of_size(d_, f.q);
    auto subI = subsets_of_size(d_, f.p);
    const int nI = f.vector_valued ? d_ : static_cast<int>(subI.size());
    for (int a = 0; a < nI; ++a) {
        for (std::size_t jj = 0; jj < subJ.size(); ++jj) {
            const std::uint32_t J = subJ[jj];
            const int slot_in = a * static_cast<int>(subJ.size()) + static_cast<int>(jj);
            for (int j = 0; j < d_; ++j) {
                int sgn = remove_sign(J, j);
                if (sgn == 0) continue;
                int slot_out = f.vector_valued
                                   ? vector_slot(a, J & ~(1u << j), f.q - 1)
                                   : scalar_slot(d_, subI[a], J & ~(1u << j), f.p, f.q - 1);
                out.comp[slot_out] += mode_multiply(f.comp[slot_in], box, [&](const std::vector<int>& mu) {
                    return cross * static_cast<double>(sgn) * std::conj(dbar_symbol(mu, j)) / g0_;
                });
            }
        }
    }
    return out;
}

TorusForm TorusBackend::laplacian(const TorusForm& f) const {
    TorusForm a = dbar_star(dbar(f));
    TorusForm b = dbar(dbar_star(f));
    if (a.comp.empty()) return b;
    if (b.comp.empty()) return a;
    return a + b;
}

TorusForm TorusBackend::green(const TorusForm& f) const {
    TorusForm out = f;
    ModeBox box(2 * d_, f.K);
    for (auto& c : out.comp)
        c = mode_multiply(c, box, [&](const std::vector<int>& mu) {
            double lam = laplace_eigenvalue(mu);
            return lam == 0.0 ? cplx(0.0, 0.0) : cplx(1.0 / lam, 0.0);
        });
    return out;
}

TorusForm TorusBackend::harmonic_project(const TorusForm& f) const {
    TorusForm out = f;
    ModeBox box(2 * d_, f.K);
    for (auto& c : out.comp)
        c = mode_multiply(c, box, [&](const std::vector<int>& mu) {
            for (int v : mu)
                if (v != 0) return cplx(0.0, 0.0);
            return cplx(1.0, 0.0);
        });
    return out;
}

TorusForm TorusBackend::del(const TorusForm& f) const {
    if (f.vector_valued)
        throw std::invalid_argument("holomorphic differential is provided for scalar forms only");
    TorusForm out = zero_scalar_form(f.p + 1, f.q, f.K);
    out.band_clipped = f.band_clipped;
    if (out.comp.empty()) return out;
    ModeBox box(2 * d_, f.K);
    auto subI = subsets_of_size(d_, f.p);
    auto subJ = subsets_of_size(d_, f.q);
    for (std::size_t ii = 0; ii < subI.size(); ++ii) {
        for (std::size_t jj = 0; jj < subJ.size(); ++jj) {
            const int slot_in = static_cast<int>(ii * subJ.size() + jj);
            for (int j = 0; j < d_; ++j) {
                int sgn = insert_sign(subI[ii], j);
                if (sgn == 0) continue;
                int slot_out = scalar_slot(d_, subI[ii] | (1u << j), subJ[jj], f.p + 1, f.q);
                out.comp[slot_out] += mode_multiply(f.comp[slot_in], box, [&](const std::vector<int>& mu) {
                    return static_cast<double>(sgn) * del_symbol(mu, j);
                });
            }
        }
    }
    return out;
}

TorusForm TorusBackend::t_operator(const TorusForm& omega) const {
    return dbar_star(green(del(omega)));
}

// ---------------------------------------------------------------------------
// Bilinear operations
// ---------------------------------------------------------------------------

TorusForm TorusBackend::bracket(const TorusForm& phi, const TorusForm& psi) const {
    if (!phi.vector_valued || !psi.vector_valued)
        throw std::invalid_argument("bracket expects vector-valued (0,*) forms");
    const int p = phi.q, q = psi.q;
    int Kout = std::min(phi.K + psi.K, band_limit_);
    TorusForm out = zero_vector_form(p + q, Kout);
    out.band_clipped =
        phi.band_clipped || psi.band_clipped || (phi.K + psi.K > band_limit_);
    if (out.comp.empty()) return out;
    ModeBox obox(2 * d_, Kout);
    bool clipped = false;

    auto subP = subsets_of_size(d_, p);
    auto subQ = subsets_of_size(d_, q);
    const double sign_pq = ((p * q) % 2 == 0) ? 1.0 : -1.0;

    ModeBox pb(2 * d_, phi.K), qb(2 * d_, psi.K);
    // Nonzero modes of d/dz_alpha applied to one component.
    auto derivative_modes = [&](const TorusForm& f, const ModeBox& box, int slot, int alpha) {
        std::vector<std::pair<std::vector<int>, cplx>> out_modes;
        std::vector<int> mu;
        const Eigen::VectorXcd& c = f.comp[slot];
        for (std::int64_t i = 0; i < c.size(); ++i) {
            if (c[i] == cplx(0.0, 0.0)) continue;
            box.decode(i, mu);
            cplx v = c[i] * del_symbol(mu, alpha);
            if (v != cplx(0.0, 0.0)) out_modes.emplace_back(mu, v);
        }
        return out_modes;
    };

    for (int alpha = 0; alpha < d_; ++alpha) {
        for (int beta = 0; beta < d_; ++beta) {
            // term 1: phi^alpha ^ d_alpha psi^beta
            for (std::size_t j1 = 0; j1 < subP.size(); ++j1) {
                auto a_modes = nonzero_modes(phi, vector_slot(alpha, subP[j1], p));
                if (a_modes.empty()) continue;
                for (std::size_t j2 = 0; j2 < subQ.size(); ++j2) {
                    int ms = merge_sign(subP[j1], subQ[j2]);
                    if (ms == 0) continue;
                    auto b_modes = derivative_modes(psi, qb, vector_slot(beta, subQ[j2], q), alpha);
                    convolve_into(a_modes, b_modes, static_cast<double>(ms),
                                  out.comp[vector_slot(beta, subP[j1] | subQ[j2], p + q)], obox,
                                  &clipped);
                }
            }
            // term 2: -(-1)^{pq} psi^alpha ^ d_alpha phi^beta
            for (std::size_t j1 = 0; j1 < subQ.size(); ++j1) {
                auto a_modes = nonzero_modes(psi, vector_slot(alpha, subQ[j1], q));
                if (a_modes.empty()) continue;
                for (std::size_t j2 = 0; j2 < subP.size(); ++j2) {
                    int ms = merge_sign(subQ[j1], subP[j2]);
                    if (ms == 0) continue;
                    auto b_modes = derivative_modes(phi, pb, vector_slot(beta, subP[j2], p), alpha);
                    convolve_into(a_modes, b_modes, -sign_pq * ms,
                                  out.comp[vector_slot(beta, subQ[j1] | subP[j2], p + q)], obox,
                                  &clipped);
                }
            }
        }
    }
    out.band_clipped = out.band_clipped || clipped;
    return out;
}

TorusForm TorusBackend::contract(const TorusForm& phi01, const TorusForm& omega) const {
    if (!phi01.vector_valued || phi01.q != 1)
        throw std::invalid_argument("contract expects a vector-valued (0,1) form on the left");
    if (omega.vector_valued)
        throw std::invalid_argument("contract expects a scalar form on the right");
    if (omega.p == 0)
        throw std::invalid_argument("contraction of a (0,q) form is undefined: no holomorphic leg");
    int Kout = std::min(phi01.K + omega.K, band_limit_);
    TorusForm out = zero_scalar_form(omega.p - 1, omega.q + 1, Kout);
    out.band_clipped =
        phi01.band_clipped || omega.band_clipped || (phi01.K + omega.K > band_limit_);
    if (out.comp.empty()) return out;
    ModeBox obox(2 * d_, Kout);
    bool clipped = false;

    auto subI = subsets_of_size(d_, omega.p);
    auto subJ = subsets_of_size(d_, omega.q);
    const double cross = ((omega.p - 1) % 2 == 0) ? 1.0 : -1.0; // dzbar_j past dz^{I'}

    for (int i = 0; i < d_; ++i) {
        for (int j = 0; j < d_; ++j) {
            auto a_modes = nonzero_modes(phi01, vector_slot(i, 1u << j, 1));
            if (a_modes.empty()) continue;
            for (std::size_t ii = 0; ii < subI.size(); ++ii) {
                int rs = remove_sign(subI[ii], i);
                if (rs == 0) continue;
                for (std::size_t jj = 0; jj < subJ.size(); ++jj) {
                    int is = insert_sign(subJ[jj], j);
                    if (is == 0) continue;
                    auto b_modes =
                        nonzero_modes(omega, scalar_slot(d_, subI[ii], subJ[jj], omega.p, omega.q));
                    if (b_modes.empty()) continue;
                    int slot_out = scalar_slot(d_, subI[ii] & ~(1u << i), subJ[jj] | (1u << j),
                                               omega.p - 1, omega.q + 1);
                    convolve_into(a_modes, b_modes, cross * rs * is, out.comp[slot_out], obox,
                                  &clipped);
                }
            }
        }
    }
    out.band_clipped = out.band_clipped || clipped;
    return out;
}

// ---------------------------------------------------------------------------
// Norms and pairings
// ---------------------------------------------------------------------------

namespace {
double parseval_weight(const TorusForm& f, double g0, double volume) {
    double w = f.vector_valued ? std::pow(g0, 1.0 - f.q) : std::pow(g0, -(f.p + f.q));
    return w * volume;
}
} // namespace

cplx TorusBackend::inner(const TorusForm& a, const TorusForm& b) const {
    if (!a.same_shape(b)) throw std::invalid_argument("inner product: mismatched shapes");
    const double w = parseval_weight(a, g0_, volume_);
    ModeBox abox(2 * d_, a.K), bbox(2 * d_, b.K);
    cplx acc = 0.0;
    std::vector<int> mu;
    for (std::size_t s = 0; s < a.comp.size(); ++s) {
        for (std::int64_t i = 0; i < a.comp[s].size(); ++i) {
            cplx av = a.comp[s][i];
            if (av == cplx(0.0, 0.0)) continue;
            abox.decode(i, mu);
            if (!bbox.contains(mu)) continue;
            acc += av * std::conj(b.comp[s][bbox.encode(mu)]);
        }
    }
    return w * acc;
}

double TorusBackend::w0_norm(const TorusForm& f) const {
    const double w = parseval_weight(f, g0_, volume_);
    double acc = 0.0;
    for (const auto& c : f.comp) acc += c.squaredNorm();
    return std::sqrt(w * acc);
}

Eigen::VectorXcd TorusBackend::component_on_grid(const TorusForm& f, int slot, int n) const {
    ModeBox box(2 * d_, f.K);
    std::vector<cplx> data(f.comp[slot].data(), f.comp[slot].data() + f.comp[slot].size());
    std::vector<int> dims(2 * d_, box.side);
    Eigen::MatrixXcd F(n, box.side);
    for (int g = 0; g < n; ++g)
        for (int mi = 0; mi < box.side; ++mi)
            F(g, mi) = std::exp(cplx(0.0, 2.0 * kPi * (mi - f.K) * g / static_cast<double>(n)));
    for (int axis = 0; axis < 2 * d_; ++axis) data = axis_transform(data, dims, axis, F);
    return Eigen::Map<Eigen::VectorXcd>(data.data(), static_cast<Eigen::Index>(data.size()));
}

cplx TorusBackend::component_at(const TorusForm& f, int slot, const std::vector<double>& xy) const {
    ModeBox box(2 * d_, f.K);
    cplx acc = 0.0;
    std::vector<int> mu;
    const Eigen::VectorXcd& c = f.comp[slot];
    for (std::int64_t i = 0; i < c.size(); ++i) {
        if (c[i] == cplx(0.0, 0.0)) continue;
        box.decode(i, mu);
        double phase = 0.0;
        for (int a = 0; a < 2 * d_; ++a) phase += mu[a] * xy[a];
        acc += c[i] * std::exp(cplx(0.0, 2.0 * kPi * phase));
    }
    return acc;
}

NormReport TorusBackend::norms(const TorusForm& f) const {
    NormReport r;
    r.band_clipped = f.band_clipped;
    r.w0 = w0_norm(f);
    const int n = 4 * std::max(f.K, 1);
    std::int64_t pts = 1;
    for (int a = 0; a < 2 * d_; ++a) pts *= n;

    std::vector<Eigen::VectorXcd> grids(f.comp.size());
    for (std::size_t s = 0; s < f.comp.size(); ++s) {
        grids[s] = component_on_grid(f, s, n);
        r.c0 = std::max(r.c0, grids[s].size() ? grids[s].cwiseAbs().maxCoeff() : 0.0);
    }

    // C^1: per component, sup|f| + sum over the 2d first derivatives of sup.
    ModeBox box(2 * d_, f.K);
    for (std::size_t s = 0; s < f.comp.size(); ++s) {
        double comp_c1 = grids[s].size() ? grids[s].cwiseAbs().maxCoeff() : 0.0;
        for (int j = 0; j < d_; ++j) {
            TorusForm dz = f, dzb = f;
            dz.comp[s] = mode_multiply(f.comp[s], box,
                                       [&](const std::vector<int>& mu) { return del_symbol(mu, j); });
            dzb.comp[s] = mode_multiply(f.comp[s], box,
                                        [&](const std::vector<int>& mu) { return dbar_symbol(mu, j); });
            Eigen::VectorXcd g1 = component_on_grid(dz, static_cast<int>(s), n);
            Eigen::VectorXcd g2 = component_on_grid(dzb, static_cast<int>(s), n);
            comp_c1 += (g1.size() ? g1.cwiseAbs().maxCoeff() : 0.0) +
                       (g2.size() ? g2.cwiseAbs().maxCoeff() : 0.0);
        }
        r.c1 = std::max(r.c1, comp_c1);
    }

    if (f.vector_valued && f.q == 1) {
        Eigen::MatrixXcd A(d_, d_);
        for (std::int64_t pt = 0; pt < pts; ++pt) {
            for (int i = 0; i < d_; ++i)
                for (int j = 0; j < d_; ++j) A(i, j) = grids[vector_slot(i, 1u << j, 1)][pt];
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
            r.sup_op = std::max(r.sup_op, svd.singularValues()[0]);
        }
    } else {
        r.sup_op = r.c0;
    }
    return r;
}

double TorusBackend::harmonic_norm_ratio() const {
    double best = 0.0;
    for (const auto& h : harmonic_vector01_basis()) {
        NormReport nr = norms(h);
        if (nr.w0 > 0.0) best = std::max(best, nr.c1 / nr.w0);
    }
    return best;
}

cplx TorusBackend::wedge_integral(const TorusForm& a, const TorusForm& b) const {
    if (a.vector_valued || b.vector_valued)
        throw std::invalid_argument("wedge integral expects scalar forms");
    if (a.p + b.p != d_ || a.q + b.q != d_) return 0.0;
    auto subIa = subsets_of_size(d_, a.p);
    auto subJa = subsets_of_size(d_, a.q);
    const std::uint32_t full = (d_ == 32) ? ~0u : ((1u << d_) - 1u);

    // integral over the fundamental domain of dz^{1..d} ^ dzbar^{1..d}
    cplx delta = cplx(0.0, 2.0 * tau_.imag()); // dz_j ^ dzbar_j = -delta dx_j dy_j
    cplx base = std::pow(-delta, d_);
    if ((d_ * (d_ - 1) / 2) % 2 == 1) base = -base;

    ModeBox abox(2 * d_, a.K), bbox(2 * d_, b.K);
    const double crossing = ((a.q * b.p) % 2 == 0) ? 1.0 : -1.0;
    cplx acc = 0.0;
    std::vector<int> mu, neg(2 * d_);
    for (std::size_t ia = 0; ia < subIa.size(); ++ia) {
        std::uint32_t I2 = full & ~subIa[ia];
        int msI = merge_sign(subIa[ia], I2);
        for (std::size_t ja = 0; ja < subJa.size(); ++ja) {
            std::uint32_t J2 = full & ~subJa[ja];
            int msJ = merge_sign(subJa[ja], J2);
            int slot_a = scalar_slot(d_, subIa[ia], subJa[ja], a.p, a.q);
            int slot_b = scalar_slot(d_, I2, J2, b.p, b.q);
            const Eigen::VectorXcd& ca = a.comp[slot_a];
            for (std::int64_t i = 0; i < ca.size(); ++i) {
                if (ca[i] == cplx(0.0, 0.0)) continue;
                abox.decode(i, mu);
                for (int t = 0; t < 2 * d_; ++t) neg[t] = -mu[t];
                if (!bbox.contains(neg)) continue;
                acc += static_cast<double>(msI * msJ) * crossing * ca[i] *
                       b.comp[slot_b][bbox.encode(neg)];
            }
        }
    }
    return acc * base;
}

// ---------------------------------------------------------------------------
// Probe / validate
// ---------------------------------------------------------------------------

ProbeReport TorusBackend::operator_norm_probe(int samples, Rng& rng) const {
    ProbeReport rep;
    std::vector<std::pair<TorusForm, TorusForm>> pairs;
    // Deterministic tour of the harmonic basis first (the sup is often
    // attained on the low modes), then random draws.
    auto basis = harmonic_vector01_basis();
    for (std::size_t i = 0; i < basis.size() && static_cast<int>(pairs.size()) < samples; ++i)
        for (std::size_t j = i; j < basis.size() && static_cast<int>(pairs.size()) < samples; ++j)
            pairs.emplace_back(basis[i], basis[j]);
    while (static_cast<int>(pairs.size()) < samples)
        pairs.emplace_back(random_vector01(rng, K_, 1.0), random_vector01(rng, K_, 1.0));

    for (auto& [phi, psi] : pairs) {
        double na = w0_norm(phi), nb = w0_norm(psi);
        if (na <= 0.0 || nb <= 0.0) {
            ++rep.skipped;
            continue;
        }
        TorusForm img = dbar_star(green(bracket(phi, psi)));
        double r = 0.5 * w0_norm(img) / (na * nb);
        rep.constant = std::max(rep.constant, r);
        ++rep.samples;
    }
    return rep;
}

std::vector<std::string> TorusBackend::validate(Rng& rng) const {
    std::vector<std::string> bad;
    const double tol = 1e-10;
    auto checknear = [&](double err, double scale, const std::string& what) {
        if (!(err <= tol * std::max(1.0, scale)))
            bad.push_back(what + ": residual " + std::to_string(err));
    };

    if (std::abs(g0_ * tau_.imag() - std::pow(volume_, 1.0 / d_)) > tol)
        bad.push_back("metric normalization: g0 * Im(tau) != V^{1/d}");

    int Kt = std::min(K_, 1);
    TorusForm s = random_scalar(rng, 1, 1, Kt);
    TorusForm v = random_vector(rng, 1, Kt);

    // dbar o dbar = 0
    checknear(w0_norm(dbar(dbar(s))), w0_norm(s), "dbar^2 on scalar forms");
    checknear(w0_norm(dbar(dbar(v))), w0_norm(v), "dbar^2 on vector forms");

    // adjointness <dbar a, b> = <a, dbar* b>
    TorusForm b2 = random_vector(rng, 2, Kt);
    cplx lhs = inner(dbar(v), b2), rhs = inner(v, dbar_star(b2));
    checknear(std::abs(lhs - rhs), std::abs(lhs) + std::abs(rhs), "adjointness of dbar / dbar*");

    // Hodge identity: id = H + Laplace o G
    TorusForm rec = harmonic_project(v) + laplacian(green(v));
    checknear(w0_norm(rec - v), w0_norm(v), "Hodge decomposition id = H + Lap G");

    // graded symmetry of the bracket on (0,1) forms
    TorusForm w = random_vector(rng, 1, Kt);
    checknear(w0_norm(bracket(v, w) - bracket(w, v)), w0_norm(bracket(v, w)) + 1.0,
              "bracket symmetry on (0,1) forms");

    // Leibniz rule: dbar[a,b] = [dbar a, b] - [a, dbar b]
    TorusForm leib = dbar(bracket(v, w)) - (bracket(dbar(v), w) - bracket(v, dbar(w)));
    checknear(w0_norm(leib), w0_norm(bracket(v, w)) + 1.0, "Leibniz rule for dbar on brackets");

    // harmonic forms are exactly the constants
    for (const auto& h : harmonic_vector01_basis())
        checknear(w0_norm(laplacian(h)), 1.0, "harmonicity of constant forms");
    return bad;
}

// ---------------------------------------------------------------------------
// Volume family support
// ---------------------------------------------------------------------------

TorusMixedForm TorusBackend::volume_base() const {
    TorusMixedForm w;
    w.accumulate(volume_form());
    return w;
}

TorusMixedForm TorusBackend::contract_volume(const TorusForm& phi01, const TorusMixedForm& w) const {
    TorusMixedForm out;
    for (const auto& [key, part] : w.parts) {
        if (key.first == 0) continue; // no holomorphic leg left to contract
        out.accumulate(contract(phi01, part));
    }
    return out;
}

double TorusBackend::volume_norm(const TorusMixedForm& w) const {
    double acc = 0.0;
    for (const auto& [key, part] : w.parts) {
        double n = w0_norm(part);
        acc += n * n;
    }
    return std::sqrt(acc);
}

double TorusBackend::volume_d_norm(const TorusMixedForm& w) const {
    TorusMixedForm dw;
    for (const auto& [key, part] : w.parts) {
        if (key.first < d_) dw.accumulate(del(part));
        if (key.second < d_) dw.accumulate(dbar(part));
    }
    return volume_norm(dw);
}

} // namespace hodgekit
