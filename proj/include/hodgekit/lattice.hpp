#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hodgekit {

using IntMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using CVec = Eigen::VectorXcd;

// Non-degenerate integral symmetric bilinear form.
struct IntegralLattice {
    IntMat gram;

    int rank() const { return static_cast<int>(gram.rows()); }
    std::int64_t pair(const IntVec& a, const IntVec& b) const;
    // Validates symmetry and non-degeneracy (throws on violation).
    void validate() const;
    // Signature (positive, negative) of the Gram matrix.
    std::pair<int, int> signature() const;

    static IntegralLattice from_name(const std::string& preset); // k3_full | hyperbolic_U | toy_rank3
    static IntegralLattice hyperbolic_U();
    static IntegralLattice e8(int sign); // E8 Cartan matrix scaled by sign = +1 / -1
    static IntegralLattice k3_full();    // U^3 + E8(-1)^2, rank 22
    static IntegralLattice toy_rank3();  // (r, xi in <2>, a) toy Mukai lattice
    static IntegralLattice direct_sum(const std::vector<IntegralLattice>& parts);
};

// Extended Chern-character vector (r, xi, a) over an NS lattice.
struct MukaiVector {
    std::int64_t r = 0;
    IntVec xi;
    std::int64_t a = 0;
};

MukaiVector mukai_vector(std::int64_t r, const IntVec& c1, std::int64_t ch2);

// (xi, xi')_S - r' a - r a'.
std::int64_t mukai_pairing(const MukaiVector& v, const MukaiVector& w, const IntegralLattice& ns);

// Gram of the rank n+2 Mukai lattice (NS + hyperbolic (r, a) block), with
// coordinate order (r, xi_1..xi_n, a).
IntegralLattice mukai_lattice(const IntegralLattice& ns);
IntVec mukai_coords(const MukaiVector& v);

struct ModuliDimension {
    std::int64_t value = 0;
    bool warned_negative_square = false;
};

// v^2 + 2 (warning when v^2 < 0: those moduli are empty or trivial).
ModuliDimension moduli_dimension(const MukaiVector& v, const IntegralLattice& ns);

// Exact rational slope (c1 . omega) / r.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1; // > 0, reduced

    static Rational make(std::int64_t n, std::int64_t d);
    friend bool operator<(const Rational& a, const Rational& b);
    friend bool operator==(const Rational& a, const Rational& b);
};

Rational slope(std::int64_t r, const IntVec& c1, const IntVec& omega, const IntegralLattice& ns);

struct StabilityComparison {
    bool strictly_smaller = false; // mu(sub) < mu(whole): the stable inequality
    bool equal = false;            // destabilizing-equality case
};

StabilityComparison stability_compare(std::int64_t r_sub, const IntVec& c1_sub,
                                      std::int64_t r_whole, const IntVec& c1_whole,
                                      const IntVec& omega, const IntegralLattice& ns);

struct OrthComplement {
    IntMat basis;          // columns: a Z-basis of v-perp, exact
    IntMat restricted_gram;
};

// Integer basis of { x : (v, x) = 0 } by unimodular column reduction of the
// linear form x -> (Gram v) . x, plus the Gram restricted to that basis.
OrthComplement orth_complement(const IntVec& v, const IntegralLattice& lattice);

// --- period-domain predicates (complex period points) ----------------------

// q extended bilinearly to complex vectors: q(z, w) = z^T Gram w.
std::complex<double> q_bilinear(const CVec& z, const CVec& w, const IntegralLattice& lat);

// Membership: |q(z,z)| <= eq_tol |z|^2 and q(z, conj z) > 0.
bool in_period_domain(const CVec& z, const IntegralLattice& lat, double eq_tol);

struct GenericityVerdict {
    bool generic = false;
    int search_bound = 0;
    std::optional<IntVec> witness; // lattice vector nearly orthogonal to z
};

// Searches integer vectors with sup-norm <= search_bound (smaller shells
// first, lexicographic within a shell, first nonzero coordinate positive)
// for |q(z, lambda)| <= eq_tol |z| ||lambda||. "Generic" means no witness
// within the bound -- an explicitly bounded verdict, never an absolute one.
GenericityVerdict is_generic_period(const CVec& z, const IntegralLattice& lat, int search_bound,
                                    double eq_tol);

// First enumerated ell with q(ell, ell) > 0 and |q(z, ell)| <= eq_tol,
// or nothing within the bound (same enumeration order as genericity).
std::optional<IntVec> projectivity_witness(const CVec& z, const IntegralLattice& lat,
                                           int search_bound, double eq_tol);

struct SequenceDomainReport {
    double min_qzzbar = 0.0; // over unit-normalized points
    double max_qzz = 0.0;    // modulus, over unit-normalized points
    bool bounded_in_domain = false;
    int first_violation = 0; // 1-based index; 0 when none
};

// Normalizes each point to |z| = 1 and checks min q(z, conj z) >= margin and
// |q(z,z)| <= eq_tol throughout: the checkable proxy for the sequence
// staying in a compact subset of the period domain.
SequenceDomainReport sequence_domain_check(const std::vector<CVec>& points,
                                           const IntegralLattice& lat, double eq_tol,
                                           double margin);

} // namespace hodgekit
