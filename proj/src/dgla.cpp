#include "hodgekit/dgla.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace hodgekit {

namespace {
// Elements may carry an empty vector as a typed zero; normalize on use.
bool is_empty(const DglaElement& e) { return e.v.size() == 0; }
} // namespace

DglaElement operator+(const DglaElement& a, const DglaElement& b) {
    if (is_empty(a)) return b;
    if (is_empty(b)) return a;
    if (!a.same_shape(b)) throw std::invalid_argument("element addition: mismatched degrees");
    DglaElement out = a;
    out.v += b.v;
    return out;
}

DglaElement operator-(const DglaElement& a, const DglaElement& b) {
    return a + (cplx(-1.0, 0.0) * b);
}

DglaElement operator*(cplx s, const DglaElement& e) {
    DglaElement out = e;
    out.v *= s;
    return out;
}

DglaVolume operator+(const DglaVolume& a, const DglaVolume& b) {
    DglaVolume out;
    out.c0 = a.c0 + b.c0;
    out.v1 = a.v1 + b.v1;
    out.v2 = a.v2 + b.v2;
    return out;
}

DglaVolume operator-(const DglaVolume& a, const DglaVolume& b) {
    return a + (cplx(-1.0, 0.0) * b);
}

DglaVolume operator*(cplx s, const DglaVolume& w) {
    DglaVolume out = w;
    out.c0 *= s;
    out.v1 = s * out.v1;
    out.v2 = s * out.v2;
    return out;
}

// ---------------------------------------------------------------------------
// Example data
// ---------------------------------------------------------------------------

DglaData DglaData::obstructed_example() {
    DglaData d;
    d.dims = {0, 2, 2, 0};
    d.D[0] = Eigen::MatrixXcd::Zero(2, 0);
    d.D[1] = Eigen::MatrixXcd::Zero(2, 2);
    d.D[1](1, 1) = 1.0; // second degree-1 vector maps to the second degree-2 vector
    d.D[2] = Eigen::MatrixXcd::Zero(0, 2);
    for (int q = 0; q < 4; ++q)
        d.gram[q] = Eigen::MatrixXcd::Identity(d.dims[static_cast<std::size_t>(q)],
                                               d.dims[static_cast<std::size_t>(q)]);
    d.bracket.assign(2, Eigen::MatrixXcd::Zero(2, 2));
    d.bracket[0](0, 0) = 0.6; // harmonic component: the obstruction lives here
    d.bracket[1](0, 0) = 1.0;
    d.bracket[1](1, 1) = 0.4;
    return d;
}

DglaData DglaData::unobstructed_example() {
    DglaData d = obstructed_example();
    d.bracket[0].setZero(); // nothing harmonic in the image: every order closes
    d.bracket[1](0, 0) = 1.0;
    d.bracket[1](0, 1) = 0.5;
    d.bracket[1](1, 0) = 0.5;
    d.bracket[1](1, 1) = 0.3;
    return d;
}

// ---------------------------------------------------------------------------
// Backend
// ---------------------------------------------------------------------------

DglaBackend::DglaBackend(DglaData data) : data_(std::move(data)) {
    for (int q = 0; q < 4; ++q) {
        int n = data_.dims[static_cast<std::size_t>(q)];
        if (n < 0) throw std::invalid_argument("negative slice dimension");
        const auto& g = data_.gram[static_cast<std::size_t>(q)];
        if (g.rows() != n || g.cols() != n)
            throw std::invalid_argument("gram matrix shape does not match slice dimension");
    }
    for (int q = 0; q < 3; ++q) {
        const auto& D = data_.D[static_cast<std::size_t>(q)];
        if (D.rows() != data_.dims[static_cast<std::size_t>(q + 1)] ||
            D.cols() != data_.dims[static_cast<std::size_t>(q)])
            throw std::invalid_argument("differential shape does not match slice dimensions");
    }
    if (static_cast<int>(data_.bracket.size()) != data_.dims[2])
        throw std::invalid_argument("bracket tensor must have one matrix per degree-2 coordinate");
    for (const auto& B : data_.bracket)
        if (B.rows() != data_.dims[1] || B.cols() != data_.dims[1])
            throw std::invalid_argument("bracket matrices must be n1 x n1");

    // Adjoints of the differentials with respect to the Grams.
    std::array<Eigen::MatrixXcd, 3> Dstar;
    for (int q = 0; q < 3; ++q) {
        const auto& D = data_.D[static_cast<std::size_t>(q)];
        const auto& Glo = data_.gram[static_cast<std::size_t>(q)];
        const auto& Ghi = data_.gram[static_cast<std::size_t>(q + 1)];
        if (D.size() == 0 || Glo.size() == 0) {
            Dstar[static_cast<std::size_t>(q)] =
                Eigen::MatrixXcd::Zero(data_.dims[static_cast<std::size_t>(q)],
                                       data_.dims[static_cast<std::size_t>(q + 1)]);
            continue;
        }
        Dstar[static_cast<std::size_t>(q)] = Glo.ldlt().solve(D.adjoint() * Ghi);
    }

    for (int q = 0; q < 4; ++q) {
        auto& op = ops_[static_cast<std::size_t>(q)];
        int n = data_.dims[static_cast<std::size_t>(q)];
        op.lap = Eigen::MatrixXcd::Zero(n, n);
        if (q < 3 && data_.D[static_cast<std::size_t>(q)].size() > 0)
            op.lap += Dstar[static_cast<std::size_t>(q)] * data_.D[static_cast<std::size_t>(q)];
        if (q > 0 && data_.D[static_cast<std::size_t>(q - 1)].size() > 0)
            op.lap += data_.D[static_cast<std::size_t>(q - 1)] * Dstar[static_cast<std::size_t>(q - 1)];
        if (n == 0) {
            op.L = op.green = op.harmonic = Eigen::MatrixXcd::Zero(0, 0);
            op.harmonic_vecs = Eigen::MatrixXcd::Zero(0, 0);
            continue;
        }
        Eigen::LLT<Eigen::MatrixXcd> llt(data_.gram[static_cast<std::size_t>(q)]);
        if (llt.info() != Eigen::Success)
            throw std::invalid_argument("gram matrix is not positive definite");
        op.L = llt.matrixL();
        // Symmetrize the Laplacian in the Gram geometry: A = L^H lap L^{-H}.
        Eigen::MatrixXcd LH = op.L.adjoint();
        Eigen::MatrixXcd A = LH * op.lap * LH.inverse();
        A = 0.5 * (A + A.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
        const auto& lam = es.eigenvalues();
        double lmax = lam.size() ? std::max(1.0, lam.maxCoeff()) : 1.0;
        Eigen::VectorXd inv = Eigen::VectorXd::Zero(n), harm = Eigen::VectorXd::Zero(n);
        std::vector<int> hcols;
        for (int i = 0; i < n; ++i) {
            if (lam[i] <= 1e-9 * lmax) {
                harm[i] = 1.0;
                hcols.push_back(i);
            } else {
                inv[i] = 1.0 / lam[i];
            }
        }
        Eigen::MatrixXcd U = es.eigenvectors();
        Eigen::MatrixXcd LHinv = LH.inverse();
        op.green = LHinv * U * inv.asDiagonal() * U.adjoint() * LH;
        op.harmonic = LHinv * U * harm.asDiagonal() * U.adjoint() * LH;
        op.harmonic_cols = hcols;
        op.harmonic_vecs = Eigen::MatrixXcd::Zero(n, static_cast<Eigen::Index>(hcols.size()));
        for (std::size_t c = 0; c < hcols.size(); ++c)
            op.harmonic_vecs.col(static_cast<Eigen::Index>(c)) = LHinv * U.col(hcols[c]);
    }
}

void DglaBackend::check_element(const DglaElement& e, const char* where) const {
    if (e.degree < 0 || e.degree > 3)
        throw std::invalid_argument(std::string(where) + ": degree out of range");
    if (e.v.size() != data_.dims[static_cast<std::size_t>(e.degree)])
        throw std::invalid_argument(std::string(where) + ": coefficient size does not match slice");
}

DglaElement DglaBackend::zero(int degree) const {
    DglaElement e;
    e.degree = degree;
    e.v = Eigen::VectorXcd::Zero(data_.dims[static_cast<std::size_t>(degree)]);
    return e;
}

DglaElement DglaBackend::basis_element(int degree, int index) const {
    DglaElement e = zero(degree);
    e.v[index] = 1.0;
    return e;
}

DglaElement DglaBackend::random_element(Rng& rng, int degree) const {
    DglaElement e = zero(degree);
    for (Eigen::Index i = 0; i < e.v.size(); ++i) e.v[i] = rng.normal_complex();
    return e;
}

std::vector<DglaElement> DglaBackend::harmonic_basis(int degree) const {
    const auto& op = ops_[static_cast<std::size_t>(degree)];
    std::vector<DglaElement> out;
    for (Eigen::Index c = 0; c < op.harmonic_vecs.cols(); ++c) {
        DglaElement e = zero(degree);
        e.v = op.harmonic_vecs.col(c);
        out.push_back(e);
    }
    return out;
}

DglaElement DglaBackend::dbar(const DglaElement& e) const {
    check_element(e, "dbar");
    if (e.degree > 2) throw std::invalid_argument("dbar: no slice above degree 3");
    DglaElement out = zero(e.degree + 1);
    if (e.v.size() > 0 && out.v.size() > 0)
        out.v = data_.D[static_cast<std::size_t>(e.degree)] * e.v;
    return out;
}

DglaElement DglaBackend::dbar_star(const DglaElement& e) const {
    check_element(e, "dbar_star");
    if (e.degree == 0) return zero(0);
    DglaElement out = zero(e.degree - 1);
    const auto& D = data_.D[static_cast<std::size_t>(e.degree - 1)];
    if (e.v.size() > 0 && out.v.size() > 0 && D.size() > 0) {
        const auto& Glo = data_.gram[static_cast<std::size_t>(e.degree - 1)];
        const auto& Ghi = data_.gram[static_cast<std::size_t>(e.degree)];
        out.v = Glo.ldlt().solve(D.adjoint() * (Ghi * e.v));
    }
    return out;
}

DglaElement DglaBackend::laplacian(const DglaElement& e) const {
    check_element(e, "laplacian");
    DglaElement out = zero(e.degree);
    if (e.v.size() > 0) out.v = ops_[static_cast<std::size_t>(e.degree)].lap * e.v;
    return out;
}

DglaElement DglaBackend::green(const DglaElement& e) const {
    check_element(e, "green");
    DglaElement out = zero(e.degree);
    if (e.v.size() > 0) out.v = ops_[static_cast<std::size_t>(e.degree)].green * e.v;
    return out;
}

DglaElement DglaBackend::harmonic_project(const DglaElement& e) const {
    check_element(e, "harmonic_project");
    DglaElement out = zero(e.degree);
    if (e.v.size() > 0) out.v = ops_[static_cast<std::size_t>(e.degree)].harmonic * e.v;
    return out;
}

DglaElement DglaBackend::bracket(const DglaElement& a, const DglaElement& b) const {
    check_element(a, "bracket");
    check_element(b, "bracket");
    if (a.degree != 1 || b.degree != 1)
        throw std::invalid_argument("bracket is defined on the degree-1 slice");
    DglaElement out = zero(2);
    for (Eigen::Index k = 0; k < out.v.size(); ++k)
        out.v[k] = (a.v.transpose() * data_.bracket[static_cast<std::size_t>(k)] * b.v)(0, 0);
    return out;
}

cplx DglaBackend::inner(const DglaElement& a, const DglaElement& b) const {
    check_element(a, "inner");
    check_element(b, "inner");
    if (!a.same_shape(b)) throw std::invalid_argument("inner product: mismatched degrees");
    if (a.v.size() == 0) return 0.0;
    return (b.v.adjoint() * data_.gram[static_cast<std::size_t>(a.degree)] * a.v)(0, 0);
}

double DglaBackend::w0_norm(const DglaElement& e) const {
    return std::sqrt(std::max(0.0, inner(e, e).real()));
}

NormReport DglaBackend::norms(const DglaElement& e) const {
    NormReport r;
    r.c0 = r.c1 = r.sup_op = r.w0 = w0_norm(e);
    return r;
}

ProbeReport DglaBackend::operator_norm_probe(int samples, Rng& rng) const {
    ProbeReport rep;
    std::vector<std::pair<DglaElement, DglaElement>> pairs;
    auto basis = harmonic_basis(1);
    for (std::size_t i = 0; i < basis.size() && static_cast<int>(pairs.size()) < samples; ++i)
        for (std::size_t j = i; j < basis.size() && static_cast<int>(pairs.size()) < samples; ++j)
            pairs.emplace_back(basis[i], basis[j]);
    while (static_cast<int>(pairs.size()) < samples)
        pairs.emplace_back(random_element(rng, 1), random_element(rng, 1));

    for (auto& [a, b] : pairs) {
        double na = w0_norm(a), nb = w0_norm(b);
        if (na <= 0.0 || nb <= 0.0) {
            ++rep.skipped;
            continue;
        }
        DglaElement img = dbar_star(green(bracket(a, b)));
        rep.constant = std::max(rep.constant, 0.5 * w0_norm(img) / (na * nb));
        ++rep.samples;
    }
    return rep;
}

std::vector<std::string> DglaBackend::validate(Rng& rng) const {
    std::vector<std::string> bad;
    const double tol = 1e-10;
    for (int q = 0; q + 1 < 3; ++q) {
        const auto& Dlo = data_.D[static_cast<std::size_t>(q)];
        const auto& Dhi = data_.D[static_cast<std::size_t>(q + 1)];
        if (Dlo.size() == 0 || Dhi.size() == 0) continue;
        if ((Dhi * Dlo).norm() > tol) bad.push_back("chain condition D o D = 0 fails");
    }
    for (int q = 0; q < 4; ++q) {
        const auto& g = data_.gram[static_cast<std::size_t>(q)];
        if (g.size() == 0) continue;
        if ((g - g.adjoint()).norm() > tol) bad.push_back("gram matrix is not Hermitian");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (g + g.adjoint()));
        if (es.eigenvalues().minCoeff() <= 0.0) bad.push_back("gram matrix is not positive definite");
    }
    for (const auto& B : data_.bracket)
        if ((B - B.transpose()).norm() > tol) bad.push_back("bracket tensor is not symmetric");

    // Hodge identity and adjointness on random elements.
    for (int q = 1; q <= 2; ++q) {
        if (dim(q) == 0) continue;
        DglaElement e = random_element(rng, q);
        DglaElement rec = harmonic_project(e) + laplacian(green(e));
        if (w0_norm(rec - e) > tol * std::max(1.0, w0_norm(e)))
            bad.push_back("Hodge decomposition id = H + Lap G fails in degree " + std::to_string(q));
    }
    if (dim(1) > 0 && dim(2) > 0) {
        DglaElement a = random_element(rng, 1), b = random_element(rng, 2);
        cplx lhs = inner(dbar(a), b), rhs = inner(a, dbar_star(b));
        if (std::abs(lhs - rhs) > tol * (1.0 + std::abs(lhs)))
            bad.push_back("adjointness of D and D* fails");
        DglaElement u = random_element(rng, 1);
        if (w0_norm(bracket(a, u) - bracket(u, a)) > tol)
            bad.push_back("bracket symmetry fails on random elements");
    }
    return bad;
}

DglaVolume DglaBackend::volume_base() const {
    DglaVolume w;
    w.c0 = 1.0;
    w.v1 = zero(1);
    w.v2 = zero(2);
    return w;
}

DglaVolume DglaBackend::contract_volume(const DglaElement& phi, const DglaVolume& w) const {
    check_element(phi, "contract_volume");
    if (phi.degree != 1)
        throw std::invalid_argument("contract_volume expects a degree-1 element");
    DglaVolume out;
    out.c0 = 0.0;
    out.v1 = w.c0 * phi;
    out.v2 = is_empty(w.v1) ? zero(2) : cplx(0.5, 0.0) * bracket(phi, w.v1);
    return out;
}

double DglaBackend::volume_norm(const DglaVolume& w) const {
    double n1 = is_empty(w.v1) ? 0.0 : w0_norm(w.v1);
    double n2 = is_empty(w.v2) ? 0.0 : w0_norm(w.v2);
    return std::sqrt(std::norm(w.c0) + n1 * n1 + n2 * n2);
}

double DglaBackend::volume_d_norm(const DglaVolume& w) const {
    DglaElement top = is_empty(w.v1) ? zero(2) : dbar(w.v1);
    if (!is_empty(w.v2)) top = top - (cplx(2.0, 0.0) * w.v2);
    return w0_norm(top);
}

} // namespace hodgekit
