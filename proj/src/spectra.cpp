#include "shifttree/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "shifttree/errors.hpp"

namespace shifttree {

std::int64_t dim_ker_adjoint_power(const WeightedShift& S, std::int64_t k) {
    if (k < 1) throw InvalidParam("k must be >= 1");
    const DirectedTreeSpec& tree = S.tree();
    std::int64_t dim = 0;
    for (std::int64_t i = 0; i < k; ++i) dim += tree.generation_card(i);
    for (const auto& v : tree.window(-1)) dim += tree.chi_count(v, k) - 1;
    return dim;
}

std::vector<std::int64_t> quotient_dims(const WeightedShift& S, std::int64_t kmax) {
    if (kmax < 1) throw InvalidParam("kmax must be >= 1");
    std::vector<std::int64_t> out;
    std::int64_t prev = 0;
    for (std::int64_t k = 1; k <= kmax; ++k) {
        const std::int64_t cur = dim_ker_adjoint_power(S, k);
        out.push_back(cur - prev);
        prev = cur;
    }
    return out;
}

ChiKerReport chi_ker_check(const DirectedTreeSpec& tree) {
    ChiKerReport rep;
    std::int64_t dim_e = 1;
    std::int64_t children_sum = 0;
    for (const auto& v : tree.branching_vertices()) {
        const auto m = static_cast<std::int64_t>(tree.children(v).size());
        dim_e += m - 1;
        children_sum += m;
    }
    rep.dim_e = dim_e;
    const std::int64_t kT = tree.branching_index();
    rep.card_at_branching_index = tree.generation_card(kT);
    rep.formula_value =
        1 - static_cast<std::int64_t>(tree.branching_vertices().size()) + children_sum;
    rep.ok = rep.card_at_branching_index == rep.formula_value;
    for (std::int64_t k = kT; k <= kT + 10; ++k) {
        const std::int64_t card = tree.generation_card(k);
        rep.generation_cards.emplace_back(k, card);
        rep.ok = rep.ok && card == dim_e;
    }
    return rep;
}

double BranchSequence::at(std::int64_t n) const {
    if (n < 1) throw InvalidParam("branch index must be >= 1");
    const auto p = static_cast<std::int64_t>(prefix.size());
    if (n <= p) return prefix[static_cast<std::size_t>(n - 1)];
    const std::int64_t offset = n - p - 1;
    if (!generator.empty()) {
        const double g = generator_value(generator, generator_offset + offset);
        return invert_tail ? 1.0 / g : g;
    }
    const double v =
        period[static_cast<std::size_t>(offset % static_cast<std::int64_t>(period.size()))];
    return invert_tail ? 1.0 / v : v;
}

namespace {

// Follows single children n steps down from v.
VertexId descend(const DirectedTreeSpec& tree, VertexId v, std::int64_t n) {
    for (std::int64_t i = 0; i < n; ++i) {
        auto cs = tree.children(v);
        if (cs.size() != 1)
            throw Error("vertex '" + v.display() + "' does not lie on a single branch");
        v = cs.front();
    }
    return v;
}

BranchSequence build_branch(const WeightedShift& S, const VertexId& head) {
    const DirectedTreeSpec& tree = S.tree();
    BranchSequence br;
    br.head = head;
    VertexId cur = head;
    // Explicit weights while walking the core or a ray prefix.
    while (true) {
        auto cs = tree.children(cur);
        if (cs.size() != 1)
            throw Error("branch through '" + cur.display() + "' is not single-child");
        const VertexId next = cs.front();
        if (next.is_ray()) {
            const RayWeightSeq& seq = S.weights().ray_weights.at(next.token);
            const auto p = static_cast<std::int64_t>(seq.prefix.size());
            std::int64_t d = next.depth;
            while (d < p) {
                br.prefix.push_back(seq.at(d));
                ++d;
            }
            if (seq.periodic()) {
                const auto q = static_cast<std::int64_t>(seq.period.size());
                for (std::int64_t i = 0; i < q; ++i) br.period.push_back(seq.at(p + (d - p + i) % q));
            } else {
                br.generator = seq.generator;
                br.generator_offset = d;
                br.invert_tail = seq.invert_tail;
            }
            return br;
        }
        br.prefix.push_back(S.weight(next));
        cur = next;
    }
}

double log_geomean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += std::log(x);
    return s / static_cast<double>(xs.size());
}

}  // namespace

UnilateralDecomposition unilateral_decomposition(const WeightedShift& S) {
    const DirectedTreeSpec& tree = S.tree();
    UnilateralDecomposition deco;
    deco.m_space = tree.window(-1);
    for (const auto& head : tree.generation(tree.branching_index()))
        deco.branches.push_back(build_branch(S, head));
    return deco;
}

VertexId UnilateralDecomposition::vertex_at(const WeightedShift& S, std::size_t branch,
                                            std::int64_t n) const {
    return descend(S.tree(), branches.at(branch).head, n);
}

SparseVector UnilateralDecomposition::apply_blocks(const WeightedShift& S,
                                                   const SparseVector& f) const {
    const DirectedTreeSpec& tree = S.tree();
    const std::int64_t kT = tree.branching_index();
    SparseVector inside_m, on_branches;
    for (const auto& [u, value] : f) {
        if (tree.generation_of(u) < kT)
            inside_m.set(u, value);
        else
            on_branches.set(u, value);
    }
    SparseVector out;
    // A and A_i: the finite block feeds itself and the branch heads.
    for (const auto& [u, value] : inside_m) {
        for (const auto& c : tree.children(u)) out.add(c, S.weight(c) * value);
    }
    // S_i: each branch shifts within itself.
    for (const auto& [u, value] : on_branches) {
        for (const auto& c : tree.children(u)) out.add(c, S.weight(c) * value);
    }
    return out;
}

namespace {

Annulus branch_annulus(const BranchSequence& br, std::int64_t N) {
    Annulus an;
    if (br.periodic()) {
        const double g = std::exp(log_geomean(br.period));
        an.inner = an.outer = g;
        return an;
    }
    // Numeric window products of length N over a finite start scan.
    const std::int64_t scan = 4 * N + 16;
    std::vector<double> L(static_cast<std::size_t>(scan + N + 2), 0.0);
    for (std::size_t m = 1; m < L.size(); ++m)
        L[m] = L[m - 1] + std::log(br.at(static_cast<std::int64_t>(m)));
    double best = -std::numeric_limits<double>::infinity();
    double worst = std::numeric_limits<double>::infinity();
    for (std::int64_t m = 0; m < scan; ++m) {
        const double lg = L[static_cast<std::size_t>(m + N)] - L[static_cast<std::size_t>(m)];
        best = std::max(best, lg);
        worst = std::min(worst, lg);
    }
    an.outer = std::exp(best / static_cast<double>(N));
    an.inner = std::exp(worst / static_cast<double>(N));
    return an;
}

}  // namespace

AnnulusSet ap_spectrum_annuli(const WeightedShift& S, std::int64_t N) {
    if (N < 1) throw InvalidParam("N must be >= 1");
    const UnilateralDecomposition deco = unilateral_decomposition(S);
    AnnulusSet set;
    set.exact = true;
    for (const auto& br : deco.branches) {
        set.branch_annuli.push_back(branch_annulus(br, N));
        set.exact = set.exact && br.periodic();
    }
    std::vector<Annulus> sorted = set.branch_annuli;
    std::sort(sorted.begin(), sorted.end(),
              [](const Annulus& a, const Annulus& b) { return a.inner < b.inner; });
    for (const auto& an : sorted) {
        if (!set.components.empty() && an.inner <= set.components.back().outer)
            set.components.back().outer = std::max(set.components.back().outer, an.outer);
        else
            set.components.push_back(an);
    }
    return set;
}

int fredholm_index(const WeightedShift& S, Complex w, std::int64_t N) {
    S.require_left_invertible();
    const AnnulusSet set = ap_spectrum_annuli(S, N);
    const double r = std::abs(w);
    constexpr double tol = 1e-9;
    for (const auto& an : set.components) {
        if (r >= an.inner - tol && r <= an.outer + tol)
            throw OnEssentialSpectrum("|w| = " + std::to_string(r) +
                                      " lies on the approximate point spectrum");
    }
    int holes = 0;
    for (const auto& an : set.branch_annuli)
        if (r < an.inner) ++holes;
    return -holes;
}

double cowen_douglas_delta(const WeightedShift& S) {
    return 1.0 / S.cauchy_dual().operator_norm();
}

CowenDouglasField cowen_douglas_field(const WeightedShift& S, Complex w, std::int64_t N) {
    if (N < 1) throw InvalidParam("N must be >= 1");
    S.require_left_invertible();
    const double delta = cowen_douglas_delta(S);
    if (!(std::abs(w) < delta))
        throw OutsideDelta("|w| = " + std::to_string(std::abs(w)) +
                           " is not inside the disc of radius " + std::to_string(delta));

    const WeightedShift dual = S.cauchy_dual();
    const CokernelBasis E = cokernel_basis(S);

    CowenDouglasField field;
    double tail = 0.0;
    for (const auto& g : E.vectors) {
        SparseVector v, h = g;
        Complex wk(1.0, 0.0);
        for (std::int64_t k = 0; k <= N; ++k) {
            v += wk * h;
            if (k < N) h = dual.apply(h);
            wk *= std::conj(w);
        }
        tail = std::max(tail, std::pow(std::abs(w), static_cast<double>(N + 1)) * h.norm());
        field.vectors.push_back(std::move(v));
    }
    field.tail_bound = tail;

    double res = 0.0;
    for (const auto& v : field.vectors) {
        SparseVector r = S.apply_adjoint(v);
        r -= std::conj(w) * v;
        res = std::max(res, r.norm());
    }
    field.residual = res;

    const int d = static_cast<int>(field.vectors.size());
    Eigen::MatrixXcd gram(d, d);
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            gram(a, b) = field.vectors[static_cast<std::size_t>(b)].inner(
                             field.vectors[static_cast<std::size_t>(a)]) /
                         (field.vectors[static_cast<std::size_t>(a)].norm() *
                          field.vectors[static_cast<std::size_t>(b)].norm());
        }
    }
    field.gram_det = gram.determinant().real();
    return field;
}

PointSpectrumCheck point_spectrum_emptiness_check(const WeightedShift& S, std::int64_t G,
                                                  const std::vector<Complex>& ws) {
    PointSpectrumCheck check;
    check.delta = cowen_douglas_delta(S);
    check.pass = true;
    for (const Complex& w : ws) {
        const Eigen::MatrixXcd m = truncated_shift_minus_w(S, w, G);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
        const double sigma_min = svd.singularValues().minCoeff();
        check.samples.emplace_back(w, sigma_min);
        const double margin = check.delta - std::abs(w);
        check.pass = check.pass && sigma_min >= margin - 1e-9;
    }
    return check;
}

Eigen::MatrixXcd truncated_adjoint_power_matrix(const WeightedShift& S, std::int64_t k,
                                                std::int64_t G) {
    const DirectedTreeSpec& tree = S.tree();
    const auto domain = tree.vertices_up_to_generation(G);
    const auto codomain = tree.vertices_up_to_generation(std::max<std::int64_t>(G - k, 0));
    std::map<VertexId, int> row;
    for (const auto& v : codomain) row.emplace(v, static_cast<int>(row.size()));
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(codomain.size()),
                                                static_cast<Eigen::Index>(domain.size()));
    for (std::size_t c = 0; c < domain.size(); ++c) {
        const SparseVector image = S.apply_adjoint_power(domain[c], k);
        for (const auto& [v, value] : image)
            m(row.at(v), static_cast<Eigen::Index>(c)) = value;
    }
    return m;
}

Eigen::MatrixXcd truncated_shift_minus_w(const WeightedShift& S, Complex w,
                                         std::int64_t G) {
    const DirectedTreeSpec& tree = S.tree();
    const auto domain = tree.vertices_up_to_generation(G);
    const auto codomain = tree.vertices_up_to_generation(G + 1);
    std::map<VertexId, int> row;
    for (const auto& v : codomain) row.emplace(v, static_cast<int>(row.size()));
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(codomain.size()),
                                                static_cast<Eigen::Index>(domain.size()));
    for (std::size_t c = 0; c < domain.size(); ++c) {
        SparseVector image = S.apply(SparseVector::basis(domain[c]));
        image -= w * SparseVector::basis(domain[c]);
        for (const auto& [v, value] : image)
            m(row.at(v), static_cast<Eigen::Index>(c)) = value;
    }
    return m;
}

Eigen::MatrixXcd pack_truncated_columns(const DirectedTreeSpec& tree,
                                        const std::vector<SparseVector>& vectors,
                                        std::int64_t G) {
    const auto domain = tree.vertices_up_to_generation(G);
    std::map<VertexId, int> row;
    for (const auto& v : domain) row.emplace(v, static_cast<int>(row.size()));
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(domain.size()),
                                                static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t c = 0; c < vectors.size(); ++c) {
        for (const auto& [v, value] : vectors[c]) {
            auto it = row.find(v);
            if (it != row.end()) m(it->second, static_cast<Eigen::Index>(c)) = value;
        }
    }
    return m;
}

std::int64_t numerical_nullity(const Eigen::MatrixXcd& m, double tol) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    std::int64_t cols = m.cols();
    std::int64_t rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) >= tol) ++rank;
    return cols - rank;
}

std::int64_t numerical_rank(const Eigen::MatrixXcd& m, double tol) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    std::int64_t rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) >= tol) ++rank;
    return rank;
}

}  // namespace shifttree
