#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace hodgekit {

using cplx = std::complex<double>;

// Exponent vector (i_1, ..., i_N) of a monomial t_1^{i_1} ... t_N^{i_N}.
// Grading is by TOTAL degree i_1 + ... + i_N.
struct MultiIndex {
    std::vector<int> e;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> exponents) : e(std::move(exponents)) {
        for (int k : e)
            if (k < 0) throw std::invalid_argument("MultiIndex: negative exponent");
    }
    static MultiIndex zero(int n) { return MultiIndex(std::vector<int>(n, 0)); }
    static MultiIndex unit(int n, int j) {
        std::vector<int> v(n, 0);
        v.at(static_cast<size_t>(j)) = 1;
        return MultiIndex(std::move(v));
    }

    int n() const { return static_cast<int>(e.size()); }
    int degree() const { return std::accumulate(e.begin(), e.end(), 0); }

    // Graded ordering: total degree first, then lexicographic. Gives a
    // deterministic iteration order for every series operation.
    friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
        int da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        return a.e < b.e;
    }
    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.e == b.e; }

    friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
        if (a.n() != b.n()) throw std::invalid_argument("MultiIndex: length mismatch");
        MultiIndex r = a;
        for (int i = 0; i < a.n(); ++i) r.e[static_cast<size_t>(i)] += b.e[static_cast<size_t>(i)];
        return r;
    }
    // Componentwise difference; returns false when b does not divide a.
    bool try_sub(const MultiIndex& b, MultiIndex& out) const {
        if (n() != b.n()) return false;
        out.e.assign(e.begin(), e.end());
        for (int i = 0; i < n(); ++i) {
            out.e[static_cast<size_t>(i)] -= b.e[static_cast<size_t>(i)];
            if (out.e[static_cast<size_t>(i)] < 0) return false;
        }
        return true;
    }

    cplx monomial(const std::vector<cplx>& t) const {
        if (static_cast<int>(t.size()) != n())
            throw std::invalid_argument("MultiIndex: evaluation point length mismatch");
        cplx r{1.0, 0.0};
        for (int i = 0; i < n(); ++i)
            for (int k = 0; k < e[static_cast<size_t>(i)]; ++k) r *= t[static_cast<size_t>(i)];
        return r;
    }
};

// Power series in N parameters truncated at total degree M, with coefficients
// in an arbitrary vector space V. Coefficients are stored sparsely: an absent
// index is a zero coefficient. V must support operator+, scalar (cplx)
// multiplication on the left, and default-construct to zero is NOT assumed —
// evaluation receives an explicit zero element.
template <class V>
struct TruncatedSeries {
    int N = 0; // number of parameters
    int M = 0; // truncation total degree
    std::map<MultiIndex, V> coeff;

    TruncatedSeries() = default;
    TruncatedSeries(int n_params, int max_degree) : N(n_params), M(max_degree) {
        if (n_params < 1 || max_degree < 0)
            throw std::invalid_argument("TruncatedSeries: need N >= 1, M >= 0");
    }

    void set(const MultiIndex& I, V value) {
        if (I.n() != N) throw std::invalid_argument("TruncatedSeries: index length mismatch");
        if (I.degree() > M) return; // beyond truncation: dropped
        coeff.insert_or_assign(I, std::move(value));
    }
    const V* get(const MultiIndex& I) const {
        auto it = coeff.find(I);
        return it == coeff.end() ? nullptr : &it->second;
    }

    // Direct evaluation sum_I coeff_I * t^I. `zero` supplies the additive
    // identity of V so empty series evaluate correctly.
    V eval(const std::vector<cplx>& t, V zero) const {
        if (static_cast<int>(t.size()) != N)
            throw std::invalid_argument("TruncatedSeries: evaluation point length mismatch");
        V acc = std::move(zero);
        for (const auto& [I, v] : coeff) acc = acc + I.monomial(t) * v;
        return acc;
    }
};

// Generic Cauchy product: out_I = sum_{J+K=I} op(a_J, b_K), truncated at
// total degree M. `op` is any bilinear map V1 x V2 -> V3 (multiplication,
// Lie bracket, contraction, ...).
template <class V1, class V2, class V3, class Op>
TruncatedSeries<V3> convolve(const TruncatedSeries<V1>& a, const TruncatedSeries<V2>& b,
                             int M, Op&& op) {
    if (a.N != b.N) throw std::invalid_argument("convolve: parameter-count mismatch");
    TruncatedSeries<V3> out(a.N, M);
    for (const auto& [J, va] : a.coeff) {
        if (J.degree() > M) continue;
        for (const auto& [K, vb] : b.coeff) {
            if (J.degree() + K.degree() > M) continue;
            MultiIndex I = J + K;
            V3 term = op(va, vb);
            auto it = out.coeff.find(I);
            if (it == out.coeff.end())
                out.coeff.emplace(I, std::move(term));
            else
                it->second = it->second + term;
        }
    }
    return out;
}

// Scalar series product (the everyday special case of convolve).
inline TruncatedSeries<cplx> series_mul(const TruncatedSeries<cplx>& a,
                                        const TruncatedSeries<cplx>& b, int M) {
    return convolve<cplx, cplx, cplx>(a, b, M, [](cplx x, cplx y) { return x * y; });
}

} // namespace hodgekit
