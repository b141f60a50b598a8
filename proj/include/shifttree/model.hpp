#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "shifttree/shift.hpp"

namespace shifttree {

struct CokernelTag {
    bool is_root = false;
    VertexId branch_vertex;  // meaningful when !is_root
    int index = 0;           // position within the branch block
};

// Orthonormal basis of E = ker S*: the root indicator first, then one block
// per branching vertex (canonical order), each block supported on that
// vertex's children.  Signs are fixed by making the first nonzero child
// coordinate positive.
struct CokernelBasis {
    std::vector<SparseVector> vectors;
    std::vector<CokernelTag> tags;
    int dim() const { return static_cast<int>(vectors.size()); }
};

CokernelBasis cokernel_basis(const WeightedShift& S);

struct RadiusEstimate {
    std::vector<double> a;            // a[n-1] = a_n
    double liminf_estimate = 0.0;     // min over the tail half of the sequence
    std::optional<double> exact_limit;  // periodic ray tails only
    double lower_bound = 0.0;           // 1 / r(dual)
    bool lower_bound_exact = false;
};

struct ModelCoefficients {
    // coeffs[n] = coordinates of P_E S'^{*n} f in the cokernel basis; the
    // list stops at the largest generation in supp f.
    std::vector<Eigen::VectorXcd> coeffs;
};

struct BasisPolynomial {
    VertexId vertex;
    std::int64_t degree = 0;  // generation of the vertex
    // nonzero coefficients only, ascending degree
    std::vector<std::pair<std::int64_t, Eigen::VectorXcd>> terms;
};

struct ReproducingCheck {
    double residual = 0.0;
    double tail_bound = 0.0;
};

// The analytic model of a left-invertible shift: multiplication by z on a
// space of E-valued holomorphic functions with a band-limited kernel
// I + sum C_{j,k} z^j conj(w)^k, where C_{j,k} vanishes for |j-k| beyond
// the tree's branching index.
class AnalyticModel {
public:
    explicit AnalyticModel(WeightedShift S);

    const WeightedShift& shift() const { return S_; }
    const WeightedShift& dual() const { return dual_; }
    const CokernelBasis& basis() const { return E_; }
    int dim_e() const { return E_.dim(); }
    std::int64_t band_limit() const { return S_.tree().branching_index(); }

    // Coordinates of the orthogonal projection onto E.
    Eigen::VectorXcd coordinates(const SparseVector& f) const;

    // C_{j,k}(a,b) = <S'^k f_b, S'^j f_a>; exact finite computation.
    Eigen::MatrixXcd coefficient_block(std::int64_t j, std::int64_t k) const;

    // All blocks with 0 <= j,k <= N that are not structurally zero,
    // computed in one incremental sweep.  Keys are (j, k).
    std::map<std::pair<std::int64_t, std::int64_t>, Eigen::MatrixXcd> band_table(
        std::int64_t N) const;

    // I + sum_{1<=j,k<=N, |j-k|<=band} C_{j,k} z^j conj(w)^k.
    Eigen::MatrixXcd kernel_partial_sum(Complex z, Complex w, std::int64_t N) const;

    RadiusEstimate radius_of_convergence(std::int64_t N) const;

    ModelCoefficients model_coefficients(const SparseVector& f) const;

    BasisPolynomial basis_polynomial(const VertexId& u) const;

    // |<U_f(w), g>_E - <f, sum_{k<=N} conj(w)^k S'^k g>| for the g_index-th
    // basis vector.  Throws OutsideDisc when |w| is not inside the
    // estimated convergence disc.
    ReproducingCheck reproducing_check(const SparseVector& f, int g_index, Complex w,
                                       std::int64_t N) const;

    // Radius used to gate point evaluations: the exact limit when
    // available, otherwise the computed liminf estimate.
    double evaluation_radius() const;

private:
    WeightedShift S_;
    WeightedShift dual_;
    CokernelBasis E_;
};

}  // namespace shifttree
