#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "shifttree/shift.hpp"

namespace shifttree {

// dim ker S*^k computed combinatorially:
// sum_{i<k} card(Chi^<i>(root)) + sum_{v in W_{-1}} (card(Chi^<k>(v)) - 1).
std::int64_t dim_ker_adjoint_power(const WeightedShift& S, std::int64_t k);

// Differences dim ker S*^k - dim ker S*^{k-1} for k = 1..kmax; every entry
// equals dim E.
std::vector<std::int64_t> quotient_dims(const WeightedShift& S, std::int64_t kmax);

struct ChiKerReport {
    bool ok = false;
    std::int64_t dim_e = 0;  // 1 + sum_{v branching} (card(Chi(v)) - 1)
    std::int64_t card_at_branching_index = 0;
    std::int64_t formula_value = 0;  // 1 - card(V_<) + sum card(Chi(v))
    std::vector<std::pair<std::int64_t, std::int64_t>> generation_cards;  // (k, card)
};

// card(Chi^<k>(root)) stabilizes at dim E from k = k_T onward.
ChiKerReport chi_ker_check(const DirectedTreeSpec& tree);

// Weight sequence w(1), w(2), ... along one single-child branch hanging
// below a vertex of generation k_T.
struct BranchSequence {
    VertexId head;  // the generation-k_T vertex the branch starts at
    std::vector<double> prefix;
    std::vector<double> period;    // empty iff generator-backed
    std::string generator;
    std::int64_t generator_offset = 0;  // ray depth of the first tail element
    bool invert_tail = false;

    bool periodic() const { return generator.empty(); }
    double at(std::int64_t n) const;  // w(n), n >= 1
};

// S restricted to generations >= k_T splits into d unilateral shifts, one
// per vertex of Chi^<k_T>(root); the finite block spans W_{-1}.
struct UnilateralDecomposition {
    std::vector<VertexId> m_space;  // W_{-1} in canonical order
    std::vector<BranchSequence> branches;

    // Action reassembled from the blocks (A, A_i, S_i); agrees with the
    // direct action exactly.
    SparseVector apply_blocks(const WeightedShift& S, const SparseVector& f) const;

    // v_{i,n}: the n-th vertex along branch i (n = 0 is the head).
    VertexId vertex_at(const WeightedShift& S, std::size_t branch, std::int64_t n) const;
};

UnilateralDecomposition unilateral_decomposition(const WeightedShift& S);

struct Annulus {
    double inner = 0.0;
    double outer = 0.0;
};

struct AnnulusSet {
    std::vector<Annulus> components;      // merged, ascending by inner radius
    std::vector<Annulus> branch_annuli;   // one per decomposition branch
    bool exact = false;                   // all branch tails periodic
};

// Approximate point spectrum = essential spectrum: per branch the annulus
// with outer radius lim (sup_m w(m+1)...w(m+n))^(1/n) and inner radius the
// corresponding inf; exact (a circle of the period geometric mean) for
// periodic tails, numeric at order N otherwise.
AnnulusSet ap_spectrum_annuli(const WeightedShift& S, std::int64_t N = 64);

// Index of S - w off the annuli: minus the number of branch holes strictly
// containing w.  Throws OnEssentialSpectrum within 1e-9 of an annulus.
int fredholm_index(const WeightedShift& S, Complex w, std::int64_t N = 64);

struct CowenDouglasField {
    std::vector<SparseVector> vectors;  // one adjoint eigenvector per basis vector of E
    double residual = 0.0;              // max_g ||(S* - conj(w)) v_g||
    double tail_bound = 0.0;            // |w|^(N+1) max_g ||S'^N g||
    double gram_det = 0.0;              // Gram determinant after normalization
};

// v_g = sum_{k<=N} conj(w)^k S'^k g solves (S* - conj(w)) v_g ~ 0 for
// |w| < delta = 1/||S'||.  Throws OutsideDelta otherwise.
CowenDouglasField cowen_douglas_field(const WeightedShift& S, Complex w, std::int64_t N);

double cowen_douglas_delta(const WeightedShift& S);

struct PointSpectrumCheck {
    double delta = 0.0;
    bool pass = false;
    std::vector<std::pair<Complex, double>> samples;  // (w, sigma_min of truncation)
};

// No unit vector supported in generations <= G can satisfy
// ||(S - w) f|| < (delta - |w|) ||f||: checks the smallest singular value
// of the truncated operator at each sample point.
PointSpectrumCheck point_spectrum_emptiness_check(const WeightedShift& S, std::int64_t G,
                                                  const std::vector<Complex>& ws);

// Dense truncation helpers (oracle-style, used by verification suites).

// Matrix of S*^k from span{e_v : gen <= G} to span{e_v : gen <= G - k},
// columns/rows in canonical vertex order.
Eigen::MatrixXcd truncated_adjoint_power_matrix(const WeightedShift& S, std::int64_t k,
                                                std::int64_t G);

// Matrix of (S - w I) from span{e_v : gen <= G} to span{e_v : gen <= G + 1}.
Eigen::MatrixXcd truncated_shift_minus_w(const WeightedShift& S, Complex w,
                                         std::int64_t G);

// Columns are the given vectors truncated to generations <= G.
Eigen::MatrixXcd pack_truncated_columns(const DirectedTreeSpec& tree,
                                        const std::vector<SparseVector>& vectors,
                                        std::int64_t G);

std::int64_t numerical_nullity(const Eigen::MatrixXcd& m, double tol = 1e-9);
std::int64_t numerical_rank(const Eigen::MatrixXcd& m, double tol = 1e-9);

}  // namespace shifttree
