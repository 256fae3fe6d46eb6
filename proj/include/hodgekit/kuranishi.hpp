#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hodgekit/multi_index.hpp"
#include "hodgekit/torus.hpp" // NormReport

namespace hodgekit {

// All multi-indices over N parameters of the given total degree,
// lexicographically ordered (deterministic assembly order).
inline std::vector<MultiIndex> multi_indices_of_degree(int N, int degree) {
    std::vector<MultiIndex> out;
    std::vector<int> e(static_cast<std::size_t>(N), 0);
    // Recursive stars-and-bars, first slot slowest.
    auto rec = [&](auto&& self, int slot, int remaining) -> void {
        if (slot == N - 1) {
            e[static_cast<std::size_t>(slot)] = remaining;
            out.emplace_back(e);
            return;
        }
        for (int k = remaining; k >= 0; --k) {
            e[static_cast<std::size_t>(slot)] = k;
            self(self, slot + 1, remaining - k);
        }
    };
    if (N >= 1 && degree >= 0) rec(rec, 0, degree);
    return out;
}

// Power series solution of the deformation recursion
//   phi_1(t) = sum_j theta_j t_j,
//   phi_mu   = (1/2) dbar_star G ( sum_{nu=1}^{mu-1} [phi_nu, phi_{mu-nu}] ),
// assembled coefficient-by-coefficient over multi-indices.
template <class Backend>
struct BeltramiSeries {
    using Form = typename Backend::Form;

    int nparams = 0;
    int M = 0;
    std::vector<Form> theta;
    TruncatedSeries<Form> series;

    Form eval(const Backend&, const std::vector<cplx>& t) const {
        return series.eval(t, cplx(0.0, 0.0) * theta.at(0));
    }
    Form linear_part(const Backend&, const std::vector<cplx>& t) const {
        Form acc = cplx(0.0, 0.0) * theta.at(0);
        for (int j = 0; j < nparams; ++j) acc = acc + t[static_cast<std::size_t>(j)] * theta[static_cast<std::size_t>(j)];
        return acc;
    }
};

template <class Backend>
BeltramiSeries<Backend> solve_kuranishi(const Backend& backend,
                                        const std::vector<typename Backend::Form>& theta,
                                        int M) {
    using Form = typename Backend::Form;
    if (theta.empty()) throw std::invalid_argument("solve_kuranishi: need at least one direction");
    if (M < 1) throw std::invalid_argument("solve_kuranishi: truncation degree must be >= 1");
    const int N = static_cast<int>(theta.size());

    // Directions must be harmonic ...
    for (const auto& th : theta) {
        double lap = backend.w0_norm(backend.laplacian(th));
        if (!(lap <= 1e-12 * std::max(1.0, backend.w0_norm(th))))
            throw std::invalid_argument("solve_kuranishi: direction is not harmonic");
    }
    // ... and linearly independent (Gram matrix nonsingular).
    Eigen::MatrixXcd gram(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            gram(i, j) = backend.inner(theta[static_cast<std::size_t>(j)],
                                       theta[static_cast<std::size_t>(i)]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (gram + gram.adjoint()));
    if (es.eigenvalues().minCoeff() <= 1e-12)
        throw std::invalid_argument("solve_kuranishi: directions are not linearly independent");

    BeltramiSeries<Backend> out;
    out.nparams = N;
    out.M = M;
    out.theta = theta;
    out.series = TruncatedSeries<Form>(N, M);
    for (int j = 0; j < N; ++j)
        out.series.set(MultiIndex::unit(N, j), theta[static_cast<std::size_t>(j)]);

    for (int mu = 2; mu <= M; ++mu) {
        for (const MultiIndex& I : multi_indices_of_degree(N, mu)) {
            bool any = false;
            Form acc; // degree-2 accumulator, shaped by the first bracket
            // Ordered pairs (J, K) with J + K = I and both of positive degree.
            for (const auto& [J, phiJ] : out.series.coeff) {
                int dj = J.degree();
                if (dj < 1 || dj >= mu) continue;
                MultiIndex K;
                if (!I.try_sub(J, K)) continue;
                const Form* phiK = out.series.get(K);
                if (!phiK) continue;
                Form term = backend.bracket(phiJ, *phiK);
                acc = any ? acc + term : term;
                any = true;
            }
            if (!any) continue;
            Form phiI = cplx(0.5, 0.0) * backend.dbar_star(backend.green(acc));
            if (backend.w0_norm(phiI) > 0.0) out.series.set(I, phiI);
        }
    }
    return out;
}

struct McResidual {
    double value = 0.0;
    bool outside_radius = false;
};

template <class Backend>
McResidual mc_residual(const Backend& backend, const BeltramiSeries<Backend>& phi,
                       const std::vector<cplx>& t,
                       double radius = std::numeric_limits<double>::infinity()) {
    McResidual r;
    double l1 = 0.0;
    for (cplx v : t) l1 += std::abs(v);
    r.outside_radius = l1 > radius;
    auto phit = phi.eval(backend, t);
    auto res = backend.dbar(phit) - cplx(0.5, 0.0) * backend.bracket(phit, phit);
    r.value = backend.w0_norm(res);
    return r;
}

// Harmonic projection of [phi(t), phi(t)] as a series; an identically zero
// series certifies smoothness of the deformation space to this order.
template <class Backend>
TruncatedSeries<typename Backend::Form> obstruction_series(const Backend& backend,
                                                           const BeltramiSeries<Backend>& phi) {
    using Form = typename Backend::Form;
    auto full = convolve<Form, Form, Form>(
        phi.series, phi.series, phi.M,
        [&](const Form& a, const Form& b) { return backend.bracket(a, b); });
    TruncatedSeries<Form> out(phi.nparams, phi.M);
    for (const auto& [I, v] : full.coeff) {
        Form h = backend.harmonic_project(v);
        if (backend.w0_norm(h) > 0.0) out.set(I, h);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Holomorphic volume family  e^{phi(t)} _| Omega_0
// ---------------------------------------------------------------------------

template <class Backend>
struct VolumeFamily {
    using Volume = typename Backend::Volume;

    typename Backend::Volume base;
    TruncatedSeries<Volume> series;

    Volume eval(const Backend&, const std::vector<cplx>& t) const {
        return series.eval(t, cplx(0.0, 0.0) * base);
    }
};

template <class Backend>
VolumeFamily<Backend> volume_family(const Backend& backend, const BeltramiSeries<Backend>& phi,
                                    const typename Backend::Volume& base) {
    using Form = typename Backend::Form;
    using Volume = typename Backend::Volume;
    if (std::abs(backend.volume_norm(base) - 1.0) > 1e-9)
        throw std::invalid_argument("volume_family: base form must have unit L2 norm");

    VolumeFamily<Backend> fam;
    fam.base = base;
    fam.series = TruncatedSeries<Volume>(phi.nparams, phi.M);
    // C_0 = base;  C_k = (1/k) i_{phi(t)} C_{k-1};  family = sum_k C_k.
    TruncatedSeries<Volume> Ck(phi.nparams, phi.M);
    Ck.set(MultiIndex::zero(phi.nparams), base);
    fam.series = Ck;
    const int depth = static_cast<int>(backend.contract_depth_cap());
    for (int k = 1; k <= std::min(phi.M, depth); ++k) {
        Ck = convolve<Form, Volume, Volume>(
            phi.series, Ck, phi.M, [&](const Form& f, const Volume& w) {
                return cplx(1.0 / k, 0.0) * backend.contract_volume(f, w);
            });
        for (const auto& [I, v] : Ck.coeff) {
            const Volume* cur = fam.series.get(I);
            fam.series.set(I, cur ? (*cur + v) : v);
        }
    }
    return fam;
}

template <class Backend>
double wp_distance(const Backend& backend, const VolumeFamily<Backend>& fam,
                   const std::vector<cplx>& t) {
    return backend.volume_norm(fam.eval(backend, t) - fam.base);
}

// ---------------------------------------------------------------------------
// Majorant series  x_k = C sum_{i=1}^{k-1} x_i x_{k-i}
// ---------------------------------------------------------------------------

struct MajorantSeries {
    double C = 0.0;
    double x1 = 0.0;
    std::vector<double> x; // x[k] for k = 1..M at indices 1..M; x[0] unused
    double tau_threshold = 0.0; // largest tau accepted: x1 * tau <= 1/(4C)
    double eps1_empirical = 0.0; // first tau where the tail passes half the linear term

    bool radius_accepts(double tau) const {
        if (C == 0.0) return true;
        return x1 * tau <= (1.0 + 1e-12) / (4.0 * C);
    }
};

inline MajorantSeries majorant(double C, double x1, int M) {
    if (C < 0.0 || x1 <= 0.0) throw std::invalid_argument("majorant: need C >= 0 and x1 > 0");
    if (M < 1) throw std::invalid_argument("majorant: need M >= 1");
    MajorantSeries m;
    m.C = C;
    m.x1 = x1;
    m.x.assign(static_cast<std::size_t>(M) + 1, 0.0);
    m.x[1] = x1;
    for (int k = 2; k <= M; ++k) {
        double s = 0.0;
        for (int i = 1; i < k; ++i) s += m.x[static_cast<std::size_t>(i)] * m.x[static_cast<std::size_t>(k - i)];
        m.x[static_cast<std::size_t>(k)] = C * s;
    }
    if (C == 0.0) {
        m.tau_threshold = std::numeric_limits<double>::infinity();
        m.eps1_empirical = std::numeric_limits<double>::infinity();
        return m;
    }
    m.tau_threshold = 1.0 / (4.0 * C * x1);

    // Empirical threshold: smallest tau where sum_{k>=2} x_k tau^k first
    // exceeds (1/2) x1 tau, located by bisection on the truncated series.
    auto tail_exceeds = [&](double tau) {
        double tail = 0.0, p = tau;
        for (int k = 2; k < static_cast<int>(m.x.size()); ++k) {
            p *= tau;
            tail += m.x[static_cast<std::size_t>(k)] * p;
        }
        return tail > 0.5 * x1 * tau;
    };
    double lo = 0.0, hi = m.tau_threshold;
    if (!tail_exceeds(hi)) {
        m.eps1_empirical = hi; // tail stays small on the whole accepted range
    } else {
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (tail_exceeds(mid) ? hi : lo) = mid;
        }
        m.eps1_empirical = 0.5 * (lo + hi);
    }
    return m;
}

// ---------------------------------------------------------------------------
// Estimate suite: two-sided comparisons with the linear part and the
// lower bound on the volume-family displacement
// ---------------------------------------------------------------------------

struct EstimateSample {
    std::vector<cplx> t;
    bool skipped = false; // outside the supplied radius
    double phi1_c1 = 0.0, phi_c1 = 0.0;          // sandwich in the C1 norm
    double phi1_w0 = 0.0, contraction_l2 = 0.0;  // sandwich in the L2 norm
    double wp = 0.0, phi_c0 = 0.0;               // displacement lower bound
    double margin_sandwich = 0.0, margin_contraction = 0.0, margin_wp = 0.0;
    bool pass_sandwich = true, pass_contraction = true, pass_wp = true;
};

struct EstimateReport {
    std::vector<EstimateSample> samples;
    double harmonic_ratio = 0.0; // the constant in the displacement bound
    int skipped = 0;
    bool all_pass = true;
    double eps_empirical = 0.0; // largest sampled |t|_1 where all three hold
};

template <class Backend>
EstimateReport verify_estimates(const Backend& backend, const BeltramiSeries<Backend>& phi,
                                const VolumeFamily<Backend>& fam,
                                const std::vector<std::vector<cplx>>& samples,
                                double radius = std::numeric_limits<double>::infinity()) {
    EstimateReport rep;
    rep.harmonic_ratio = backend.harmonic_norm_ratio();
    for (const auto& t : samples) {
        EstimateSample s;
        s.t = t;
        double l1 = 0.0;
        for (cplx v : t) l1 += std::abs(v);
        if (l1 > radius) {
            s.skipped = true;
            ++rep.skipped;
            rep.samples.push_back(std::move(s));
            continue;
        }
        auto phit = phi.eval(backend, t);
        auto phi1 = phi.linear_part(backend, t);
        NormReport nt = backend.norms(phit);
        NormReport n1 = backend.norms(phi1);
        s.phi1_c1 = n1.c1;
        s.phi_c1 = nt.c1;
        s.phi_c0 = nt.c0;
        s.pass_sandwich = (0.5 * n1.c1 <= nt.c1 + 1e-15) && (nt.c1 <= 1.5 * n1.c1 + 1e-15);
        s.margin_sandwich = std::min(nt.c1 - 0.5 * n1.c1, 1.5 * n1.c1 - nt.c1);

        s.phi1_w0 = n1.w0;
        s.contraction_l2 = backend.volume_norm(backend.contract_volume(phit, fam.base));
        s.pass_contraction = (0.5 * n1.w0 <= s.contraction_l2 + 1e-15) &&
                             (s.contraction_l2 <= 1.5 * n1.w0 + 1e-15);
        s.margin_contraction =
            std::min(s.contraction_l2 - 0.5 * n1.w0, 1.5 * n1.w0 - s.contraction_l2);

        s.wp = wp_distance(backend, fam, t);
        double bound = s.phi_c0 / (6.0 * rep.harmonic_ratio);
        s.pass_wp = s.wp + 1e-15 >= bound;
        s.margin_wp = s.wp - bound;

        bool all = s.pass_sandwich && s.pass_contraction && s.pass_wp;
        rep.all_pass = rep.all_pass && all;
        if (all) rep.eps_empirical = std::max(rep.eps_empirical, l1);
        rep.samples.push_back(std::move(s));
    }
    return rep;
}

} // namespace hodgekit
