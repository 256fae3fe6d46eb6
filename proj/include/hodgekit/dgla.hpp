#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "hodgekit/multi_index.hpp"
#include "hodgekit/rng.hpp"
#include "hodgekit/torus.hpp" // NormReport / ProbeReport

namespace hodgekit {

// Element of a finite-dimensional differential graded Lie algebra, stored as
// a coefficient vector in the basis of its degree slice.
struct DglaElement {
    int degree = 1;
    Eigen::VectorXcd v;

    bool same_shape(const DglaElement& o) const {
        return degree == o.degree && v.size() == o.v.size();
    }
};

DglaElement operator+(const DglaElement& a, const DglaElement& b);
DglaElement operator-(const DglaElement& a, const DglaElement& b);
DglaElement operator*(cplx s, const DglaElement& e);

// Model of the holomorphic-volume family for the abstract backend: the line
// spanned by the base class, a depth-one slot in degree 1 and a depth-two
// slot in degree 2, graded orthogonal. Contraction sends the base to the
// contracting element and pairs two contractions into half their bracket,
// matching the expansion of the exponential to depth two; deeper slots
// vanish by construction. The model differential sends (c, v1, v2) to
// dbar(v1) - 2 v2 in degree 2, so a family is closed exactly when its
// depth-one part solves the structure equation.
struct DglaVolume {
    cplx c0 = 0.0;
    DglaElement v1; // degree 1
    DglaElement v2; // degree 2
};

DglaVolume operator+(const DglaVolume& a, const DglaVolume& b);
DglaVolume operator-(const DglaVolume& a, const DglaVolume& b);
DglaVolume operator*(cplx s, const DglaVolume& w);

// Defining data of a four-slice DGLA  V^0 -> V^1 -> V^2 -> V^3  with a
// symmetric bracket V^1 x V^1 -> V^2 (all other bracket blocks zero, which
// closes the graded Jacobi and Leibniz identities trivially in this range).
struct DglaData {
    std::array<int, 4> dims{0, 0, 0, 0};
    std::array<Eigen::MatrixXcd, 3> D;    // D[q]: V^q -> V^{q+1}
    std::array<Eigen::MatrixXcd, 4> gram; // Hermitian positive definite
    // bracket[k] is the n1 x n1 symmetric matrix of the k-th degree-2
    // coordinate: [a, b]_k = a^T bracket[k] b.
    std::vector<Eigen::MatrixXcd> bracket;

    static DglaData obstructed_example();
    static DglaData unobstructed_example();
};

class DglaBackend {
public:
    using Form = DglaElement;
    using Volume = DglaVolume;

    explicit DglaBackend(DglaData data);

    const DglaData& data() const { return data_; }
    int dim(int degree) const { return data_.dims[static_cast<std::size_t>(degree)]; }

    DglaElement zero(int degree) const;
    DglaElement basis_element(int degree, int index) const;
    DglaElement random_element(Rng& rng, int degree) const;
    std::vector<DglaElement> harmonic_basis(int degree) const;

    DglaElement dbar(const DglaElement& e) const;
    DglaElement dbar_star(const DglaElement& e) const;
    DglaElement laplacian(const DglaElement& e) const;
    DglaElement green(const DglaElement& e) const;
    DglaElement harmonic_project(const DglaElement& e) const;
    DglaElement bracket(const DglaElement& a, const DglaElement& b) const;

    cplx inner(const DglaElement& a, const DglaElement& b) const;
    double w0_norm(const DglaElement& e) const;
    // On a finite-dimensional slice every norm in the report is the Gram
    // norm; the distinct fields exist for interface parity with the torus.
    NormReport norms(const DglaElement& e) const;
    double harmonic_norm_ratio() const { return 1.0; }

    ProbeReport operator_norm_probe(int samples, Rng& rng) const;
    std::vector<std::string> validate(Rng& rng) const;

    DglaVolume volume_base() const;
    DglaVolume contract_volume(const DglaElement& phi, const DglaVolume& w) const;
    double volume_norm(const DglaVolume& w) const;
    double volume_d_norm(const DglaVolume& w) const;
    double contract_depth_cap() const { return 2.0; }

private:
    DglaData data_;
    // Per degree: Cholesky factor L of the Gram (G = L L^H), eigensystem of
    // the Gram-symmetrized Laplacian, kept for green / harmonic_project.
    struct DegreeOps {
        Eigen::MatrixXcd L;          // Cholesky factor of the Gram
        Eigen::MatrixXcd lap;        // Laplacian matrix on coefficients
        Eigen::MatrixXcd green;      // pseudo-inverse on the nonzero spectrum
        Eigen::MatrixXcd harmonic;   // projector onto the zero eigenspace
        std::vector<int> harmonic_cols; // basis indices (eigenvector count)
        Eigen::MatrixXcd harmonic_vecs; // orthonormal (in Gram) harmonic basis
    };
    std::array<DegreeOps, 4> ops_;

    void check_element(const DglaElement& e, const char* where) const;
};

} // namespace hodgekit
