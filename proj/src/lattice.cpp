#include "hodgekit/lattice.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hodgekit {

namespace {

// Fraction-free (Bareiss) determinant, exact in 64-bit for the small
// integral Grams used here.
std::int64_t bareiss_det(IntMat m) {
    const int n = static_cast<int>(m.rows());
    if (n == 0) return 1;
    std::int64_t sign = 1, prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m(k, k) == 0) {
            int swap = -1;
            for (int i = k + 1; i < n; ++i)
                if (m(i, k) != 0) {
                    swap = i;
                    break;
                }
            if (swap < 0) return 0;
            m.row(k).swap(m.row(swap));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

} // namespace

std::int64_t IntegralLattice::pair(const IntVec& a, const IntVec& b) const {
    if (a.size() != gram.rows() || b.size() != gram.rows())
        throw std::invalid_argument("lattice pairing: vector length must equal rank");
    std::int64_t acc = 0;
    for (int i = 0; i < gram.rows(); ++i)
        for (int j = 0; j < gram.cols(); ++j) acc += a[i] * gram(i, j) * b[j];
    return acc;
}

void IntegralLattice::validate() const {
    if (gram.rows() != gram.cols()) throw std::invalid_argument("gram matrix must be square");
    if (gram != gram.transpose()) throw std::invalid_argument("gram matrix must be symmetric");
    if (bareiss_det(gram) == 0) throw std::invalid_argument("gram matrix must be non-degenerate");
}

std::pair<int, int> IntegralLattice::signature() const {
    Eigen::MatrixXd g = gram.cast<double>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    int pos = 0, neg = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        if (es.eigenvalues()[i] > 1e-9) ++pos;
        else if (es.eigenvalues()[i] < -1e-9) ++neg;
    }
    return {pos, neg};
}

IntegralLattice IntegralLattice::hyperbolic_U() {
    IntegralLattice l;
    l.gram = IntMat::Zero(2, 2);
    l.gram(0, 1) = l.gram(1, 0) = 1;
    return l;
}

IntegralLattice IntegralLattice::e8(int sign) {
    // Cartan matrix of E8: an A7 chain on nodes 1..7 with node 8 attached
    // to node 5; determinant 1.
    IntegralLattice l;
    l.gram = IntMat::Zero(8, 8);
    for (int i = 0; i < 8; ++i) l.gram(i, i) = 2;
    for (int i = 0; i + 1 < 7; ++i) l.gram(i, i + 1) = l.gram(i + 1, i) = -1;
    l.gram(7, 4) = l.gram(4, 7) = -1;
    l.gram *= sign;
    return l;
}

IntegralLattice IntegralLattice::direct_sum(const std::vector<IntegralLattice>& parts) {
    int n = 0;
    for (const auto& p : parts) n += p.rank();
    IntegralLattice l;
    l.gram = IntMat::Zero(n, n);
    int at = 0;
    for (const auto& p : parts) {
        l.gram.block(at, at, p.rank(), p.rank()) = p.gram;
        at += p.rank();
    }
    return l;
}

IntegralLattice IntegralLattice::k3_full() {
    auto U = hyperbolic_U();
    auto E = e8(-1);
    return direct_sum({U, U, U, E, E});
}

IntegralLattice IntegralLattice::toy_rank3() {
    IntegralLattice l;
    l.gram = IntMat::Zero(3, 3);
    l.gram(0, 2) = l.gram(2, 0) = -1;
    l.gram(1, 1) = 2;
    return l;
}

IntegralLattice IntegralLattice::from_name(const std::string& preset) {
    if (preset == "k3_full") return k3_full();
    if (preset == "hyperbolic_U") return hyperbolic_U();
    if (preset == "toy_rank3") return toy_rank3();
    throw std::invalid_argument("unknown lattice preset '" + preset +
                                "' (known: k3_full, hyperbolic_U, toy_rank3)");
}

MukaiVector mukai_vector(std::int64_t r, const IntVec& c1, std::int64_t ch2) {
    MukaiVector v;
    v.r = r;
    v.xi = c1;
    v.a = ch2 + r;
    return v;
}

std::int64_t mukai_pairing(const MukaiVector& v, const MukaiVector& w, const IntegralLattice& ns) {
    if (v.xi.size() != w.xi.size())
        throw std::invalid_argument("mukai_pairing: NS ranks do not match");
    return ns.pair(v.xi, w.xi) - w.r * v.a - v.r * w.a;
}

IntegralLattice mukai_lattice(const IntegralLattice& ns) {
    const int n = ns.rank();
    IntegralLattice l;
    l.gram = IntMat::Zero(n + 2, n + 2);
    l.gram.block(1, 1, n, n) = ns.gram;
    l.gram(0, n + 1) = l.gram(n + 1, 0) = -1;
    return l;
}

IntVec mukai_coords(const MukaiVector& v) {
    IntVec x(v.xi.size() + 2);
    x[0] = v.r;
    x.segment(1, v.xi.size()) = v.xi;
    x[v.xi.size() + 1] = v.a;
    return x;
}

ModuliDimension moduli_dimension(const MukaiVector& v, const IntegralLattice& ns) {
    ModuliDimension d;
    std::int64_t sq = mukai_pairing(v, v, ns);
    d.value = sq + 2;
    d.warned_negative_square = sq < 0;
    return d;
}

Rational Rational::make(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::invalid_argument("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    std::int64_t g = std::gcd(std::llabs(n), d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    return Rational{n, d};
}

bool operator<(const Rational& a, const Rational& b) { return a.num * b.den < b.num * a.den; }
bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }

Rational slope(std::int64_t r, const IntVec& c1, const IntVec& omega, const IntegralLattice& ns) {
    if (r <= 0) throw std::invalid_argument("slope: rank must be positive");
    return Rational::make(ns.pair(c1, omega), r);
}

StabilityComparison stability_compare(std::int64_t r_sub, const IntVec& c1_sub,
                                      std::int64_t r_whole, const IntVec& c1_whole,
                                      const IntVec& omega, const IntegralLattice& ns) {
    if (!(0 < r_sub && r_sub < r_whole))
        throw std::invalid_argument("stability_compare: need 0 < rank(sub) < rank(whole)");
    Rational mu_sub = slope(r_sub, c1_sub, omega, ns);
    Rational mu_whole = slope(r_whole, c1_whole, omega, ns);
    StabilityComparison c;
    c.strictly_smaller = mu_sub < mu_whole;
    c.equal = mu_sub == mu_whole;
    return c;
}

OrthComplement orth_complement(const IntVec& v, const IntegralLattice& lattice) {
    const int n = lattice.rank();
    if (v.size() != n) throw std::invalid_argument("orth_complement: vector length must equal rank");
    if (v.isZero()) throw std::invalid_argument("orth_complement: v must be nonzero");

    // Linear form x -> w . x with w = Gram v. Column-reduce w^T U to
    // (g, 0, ..., 0) with U unimodular; the kernel is spanned by the
    // remaining columns of U.
    IntVec w = lattice.gram * v;
    IntMat U = IntMat::Identity(n, n);
    IntVec c = w;

    while (true) {
        // Locate the smallest nonzero |entry| as the pivot.
        int piv = -1;
        for (int i = 0; i < n; ++i)
            if (c[i] != 0 && (piv < 0 || std::llabs(c[i]) < std::llabs(c[piv]))) piv = i;
        if (piv < 0) throw std::invalid_argument("orth_complement: degenerate pairing vector");
        bool done = true;
        for (int i = 0; i < n; ++i) {
            if (i == piv || c[i] == 0) continue;
            std::int64_t q = c[i] / c[piv];
            c[i] -= q * c[piv];
            U.col(i) -= q * U.col(piv);
            if (c[i] != 0) done = false;
        }
        if (done) {
            if (piv != 0) {
                std::swap(c[0], c[piv]);
                U.col(0).swap(U.col(piv));
            }
            break;
        }
    }

    OrthComplement out;
    out.basis = U.rightCols(n - 1);
    out.restricted_gram = out.basis.transpose() * lattice.gram * out.basis;
    return out;
}

// ---------------------------------------------------------------------------
// Period-domain predicates
// ---------------------------------------------------------------------------

std::complex<double> q_bilinear(const CVec& z, const CVec& w, const IntegralLattice& lat) {
    if (z.size() != lat.rank() || w.size() != lat.rank())
        throw std::invalid_argument("q_bilinear: vector length must equal rank");
    Eigen::MatrixXcd g = lat.gram.cast<double>().cast<std::complex<double>>();
    return (z.transpose() * g * w)(0, 0);
}

bool in_period_domain(const CVec& z, const IntegralLattice& lat, double eq_tol) {
    double n2 = z.squaredNorm();
    if (!(n2 > 0.0)) throw std::invalid_argument("in_period_domain: z must be nonzero");
    std::complex<double> qzz = q_bilinear(z, z, lat);
    std::complex<double> qzzbar = q_bilinear(z, z.conjugate(), lat);
    return std::abs(qzz) <= eq_tol * n2 && qzzbar.real() > 0.0;
}

namespace {

// Deterministic enumeration of nonzero integer vectors: sup-norm shells
// s = 1..bound, ascending lexicographic order within a shell, first nonzero
// coordinate positive (each +/- pair visited once).
template <class F>
void enumerate_lattice_vectors(int n, int bound, F&& visit) {
    IntVec lambda(n);
    for (int s = 1; s <= bound; ++s) {
        lambda.setConstant(-s);
        while (true) {
            bool on_shell = false;
            for (int i = 0; i < n; ++i)
                if (std::llabs(lambda[i]) == s) on_shell = true;
            if (on_shell) {
                int first = 0;
                while (first < n && lambda[first] == 0) ++first;
                if (first < n && lambda[first] > 0)
                    if (!visit(lambda)) return;
            }
            // Odometer with the last coordinate fastest => lex order.
            int k = n - 1;
            while (k >= 0 && lambda[k] == s) {
                lambda[k] = -s;
                --k;
            }
            if (k < 0) break;
            ++lambda[k];
        }
    }
}

} // namespace

GenericityVerdict is_generic_period(const CVec& z, const IntegralLattice& lat, int search_bound,
                                    double eq_tol) {
    if (search_bound < 1) throw std::invalid_argument("is_generic_period: bound must be >= 1");
    GenericityVerdict verdict;
    verdict.search_bound = search_bound;
    verdict.generic = true;
    const double zn = z.norm();
    enumerate_lattice_vectors(lat.rank(), search_bound, [&](const IntVec& lambda) {
        CVec lc = lambda.cast<double>().cast<std::complex<double>>();
        double ln = lc.norm();
        if (std::abs(q_bilinear(z, lc, lat)) <= eq_tol * zn * ln) {
            verdict.generic = false;
            verdict.witness = lambda;
            return false; // stop the search
        }
        return true;
    });
    return verdict;
}

std::optional<IntVec> projectivity_witness(const CVec& z, const IntegralLattice& lat,
                                           int search_bound, double eq_tol) {
    if (search_bound < 1) throw std::invalid_argument("projectivity_witness: bound must be >= 1");
    std::optional<IntVec> found;
    enumerate_lattice_vectors(lat.rank(), search_bound, [&](const IntVec& ell) {
        if (lat.pair(ell, ell) <= 0) return true;
        CVec lc = ell.cast<double>().cast<std::complex<double>>();
        if (std::abs(q_bilinear(z, lc, lat)) <= eq_tol) {
            found = ell;
            return false;
        }
        return true;
    });
    return found;
}

SequenceDomainReport sequence_domain_check(const std::vector<CVec>& points,
                                           const IntegralLattice& lat, double eq_tol,
                                           double margin) {
    if (points.empty()) throw std::invalid_argument("sequence_domain_check: need >= 1 point");
    SequenceDomainReport rep;
    rep.min_qzzbar = std::numeric_limits<double>::infinity();
    rep.max_qzz = 0.0;
    rep.bounded_in_domain = true;
    int idx = 0;
    for (const CVec& p : points) {
        ++idx;
        double n = p.norm();
        if (!(n > 0.0)) throw std::invalid_argument("sequence_domain_check: zero point");
        CVec z = p / n;
        double qzzbar = q_bilinear(z, z.conjugate(), lat).real();
        double qzz = std::abs(q_bilinear(z, z, lat));
        rep.min_qzzbar = std::min(rep.min_qzzbar, qzzbar);
        rep.max_qzz = std::max(rep.max_qzz, qzz);
        bool ok = qzzbar >= margin && qzz <= eq_tol;
        if (!ok && rep.bounded_in_domain) {
            rep.bounded_in_domain = false;
            rep.first_violation = idx;
        }
    }
    return rep;
}

} // namespace hodgekit
