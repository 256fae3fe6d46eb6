#include "hodgekit/period_map.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hodgekit/subsets.hpp"

namespace hodgekit {

namespace {

// Constant scalar form with a single component dz^I ^ dzbar^J.
TorusForm constant_component(const TorusBackend& b, int p, int q, std::uint32_t maskI,
                             std::uint32_t maskJ, cplx value) {
    TorusForm f = b.zero_scalar_form(p, q, 0); // K=0 box: a single mode entry
    f.comp[static_cast<std::size_t>(b.scalar_slot(b.dim(), maskI, maskJ, p, q))][0] = value;
    return f;
}

} // namespace

HodgeFrame make_torus_frame(const TorusBackend& b) {
    const int d = b.dim();
    HodgeFrame fr;
    // W0 weight of any scalar 2-form is (1/g0)^2 * V, so one normalizer fits all.
    const double N = b.metric_coeff() / std::sqrt(b.volume());

    for (std::uint32_t m : subsets_of_size(d, 2))
        fr.eta20.push_back(constant_component(b, 2, 0, m, 0u, N));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            fr.eta11.push_back(constant_component(b, 1, 1, 1u << i, 1u << j, N));
    for (std::uint32_t m : subsets_of_size(d, 2))
        fr.eta02.push_back(constant_component(b, 0, 2, 0u, m, N));

    fr.h20 = static_cast<int>(fr.eta20.size());
    fr.h11 = static_cast<int>(fr.eta11.size());
    fr.h02 = static_cast<int>(fr.eta02.size());

    if (d == 2) {
        const int n = fr.dim();
        fr.Q = Eigen::MatrixXcd::Zero(n, n);
        std::vector<const TorusForm*> all;
        for (const auto& f : fr.eta20) all.push_back(&f);
        for (const auto& f : fr.eta11) all.push_back(&f);
        for (const auto& f : fr.eta02) all.push_back(&f);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) fr.Q(i, j) = b.wedge_integral(*all[static_cast<std::size_t>(i)], *all[static_cast<std::size_t>(j)]);
    }
    return fr;
}

std::vector<std::string> validate_frame(const TorusBackend& b, const HodgeFrame& fr) {
    std::vector<std::string> bad;
    if (fr.h20 != fr.h02) bad.push_back("frame: h20 != h02");
    std::vector<const TorusForm*> groups[3];
    for (const auto& f : fr.eta20) groups[0].push_back(&f);
    for (const auto& f : fr.eta11) groups[1].push_back(&f);
    for (const auto& f : fr.eta02) groups[2].push_back(&f);
    for (const auto& g : groups) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (b.w0_norm(b.laplacian(*g[i])) > 1e-12)
                bad.push_back("frame: element not harmonic");
            for (std::size_t j = 0; j < g.size(); ++j) {
                cplx ip = b.inner(*g[i], *g[j]);
                cplx want = (i == j) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
                if (std::abs(ip - want) > 1e-10) bad.push_back("frame: Gram matrix is not the identity");
            }
        }
    }
    return bad;
}

BlockUpperUnipotent quasi_period(const TorusBackend& b, const HodgeFrame& fr,
                                 const TorusForm& phi) {
    NormReport nr = b.norms(phi);
    if (!(nr.sup_op < 1.0))
        throw std::invalid_argument("quasi_period: sup operator norm of phi must be < 1, got " +
                                    std::to_string(nr.sup_op));

    BlockUpperUnipotent blocks(fr.h20, fr.h11, fr.h02);

    auto neumann = [&](const TorusForm& eta) {
        TorusForm rho = eta;
        const double scale = std::max(1.0, b.w0_norm(eta));
        for (int it = 0; it < 200; ++it) {
            TorusForm next = eta - b.t_operator(b.contract(phi, rho));
            double update = b.w0_norm(next - rho);
            rho = next;
            if (update < 1e-12 * scale) return rho;
        }
        throw std::runtime_error(
            "quasi_period: Neumann iteration for (I + T i_phi)^{-1} did not converge "
            "within 200 steps (operator norm of phi: " +
            std::to_string(nr.sup_op) + ")");
    };

    for (int r = 0; r < fr.h20; ++r) {
        TorusForm rho = neumann(fr.eta20[static_cast<std::size_t>(r)]);
        TorusForm once = b.contract(phi, rho);
        TorusForm h1 = b.harmonic_project(once);
        for (int c = 0; c < fr.h11; ++c)
            blocks.B01(r, c) = b.inner(h1, fr.eta11[static_cast<std::size_t>(c)]);
        TorusForm twice = b.contract(phi, once);
        TorusForm h2 = b.harmonic_project(twice);
        for (int c = 0; c < fr.h02; ++c)
            blocks.B02(r, c) = 0.5 * b.inner(h2, fr.eta02[static_cast<std::size_t>(c)]);
    }
    for (int r = 0; r < fr.h11; ++r) {
        TorusForm rho = neumann(fr.eta11[static_cast<std::size_t>(r)]);
        TorusForm once = b.contract(phi, rho);
        TorusForm h1 = b.harmonic_project(once);
        for (int c = 0; c < fr.h02; ++c)
            blocks.B12(r, c) = b.inner(h1, fr.eta02[static_cast<std::size_t>(c)]);
    }
    return blocks;
}

double transversality_check(const std::function<BlockUpperUnipotent(double)>& curve, double t,
                            double h) {
    if (!(h > 0.0)) throw std::invalid_argument("transversality_check: step must be positive");
    BlockUpperUnipotent plus = curve(t + h);
    BlockUpperUnipotent minus = curve(t - h);
    BlockUpperUnipotent center = curve(t);
    Eigen::MatrixXcd d01 = (plus.B01 - minus.B01) / (2.0 * h);
    Eigen::MatrixXcd d02 = (plus.B02 - minus.B02) / (2.0 * h);
    Eigen::MatrixXcd res = d02 - d01 * center.B12;
    return res.size() ? res.cwiseAbs().maxCoeff() : 0.0;
}

cplx purity_determinant(const BlockUpperUnipotent& blocks) {
    const Eigen::MatrixXcd& a = blocks.B01;
    const Eigen::MatrixXcd& b = blocks.B02;
    const Eigen::MatrixXcd& c = blocks.B12;
    const int h02 = blocks.h02;
    if (h02 == 0) return 1.0;
    // Eliminate the bottom block row against the unipotent top rows; the
    // determinant collapses to the final h02 x h02 Schur block.
    Eigen::MatrixXcd schur = Eigen::MatrixXcd::Identity(h02, h02) - b.conjugate() * b -
                             (a.conjugate() - b.conjugate() * a) * c;
    return schur.determinant();
}

BlockSampler block_sampler_torus(const TorusBackend& backend, const HodgeFrame& frame) {
    return [&backend, &frame](double r, Rng& rng) {
        TorusForm phi = backend.random_vector01(rng, backend.cutoff(), r);
        return quasi_period(backend, frame, phi);
    };
}

BlockSampler block_sampler_envelope(int h20, int h11, int h02) {
    return [h20, h11, h02](double r, Rng& rng) {
        BlockUpperUnipotent blocks(h20, h11, h02);
        auto fill = [&rng](Eigen::MatrixXcd& m, double scale) {
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal_complex();
            double top = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
            if (top > 0.0) m *= scale / top;
        };
        const double near = r / (1.0 - r);
        const double far = r * r / (1.0 - r);
        fill(blocks.B01, near);
        fill(blocks.B12, near);
        fill(blocks.B02, far);
        return blocks;
    };
}

StabilityRadiusReport stability_radius(const BlockSampler& sampler, int trials, Rng& rng,
                                       double pd_margin, double cap) {
    if (trials < 1) throw std::invalid_argument("stability_radius: trials must be >= 1");
    StabilityRadiusReport rep;
    rep.cap = cap;
    rep.trials = trials;

    // A sampler that fails to produce blocks at radius r (e.g. a transport
    // iteration that no longer converges) counts as fully unstable there.
    auto worst_at = [&](double r) {
        double worst = std::numeric_limits<double>::infinity();
        for (int k = 0; k < trials; ++k) {
            try {
                worst = std::min(worst, std::abs(purity_determinant(sampler(r, rng))));
            } catch (const std::exception&) {
                return 0.0;
            }
        }
        return worst;
    };

    double w = worst_at(cap);
    if (w >= pd_margin) {
        rep.radius = cap;
        rep.saturated = true;
        rep.worst_det = w;
        return rep;
    }
    double lo = 0.0, hi = cap;
    double worst_lo = 1.0; // det at zero blocks
    for (int it = 0; it < 40; ++it) {
        double mid = 0.5 * (lo + hi);
        double wm = worst_at(mid);
        if (wm >= pd_margin) {
            lo = mid;
            worst_lo = wm;
        } else {
            hi = mid;
        }
    }
    rep.radius = lo;
    rep.worst_det = worst_lo;
    return rep;
}

} // namespace hodgekit
