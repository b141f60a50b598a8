#include "shifttree/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shifttree/errors.hpp"

namespace shifttree {

namespace {

double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

std::int64_t max_generation(const DirectedTreeSpec& tree, const SparseVector& f) {
    std::int64_t g = -1;
    for (const auto& [v, value] : f) g = std::max(g, tree.generation_of(v));
    return g;
}

}  // namespace

CokernelBasis cokernel_basis(const WeightedShift& S) {
    S.require_left_invertible();
    const DirectedTreeSpec& tree = S.tree();

    CokernelBasis basis;
    basis.vectors.push_back(SparseVector::basis(tree.root()));
    basis.tags.push_back(CokernelTag{true, tree.root(), 0});

    for (const auto& v : tree.branching_vertices()) {
        const auto children = tree.children(v);
        const auto m = children.size();

        // Unit vector in the direction of the child weights.
        SparseVector lambda_hat;
        double norm_sq = 0.0;
        for (const auto& c : children) {
            const double w = S.weight(c);
            lambda_hat.add(c, w);
            norm_sq += w * w;
        }
        lambda_hat *= Complex(1.0 / std::sqrt(norm_sq), 0.0);

        // Gram-Schmidt over child indicators projected off lambda_hat.
        std::vector<SparseVector> kept;
        for (std::size_t i = 0; i < m; ++i) {
            SparseVector u = SparseVector::basis(children[i]);
            const Complex along = u.inner(lambda_hat);
            u -= along * lambda_hat;
            for (const auto& q : kept) u -= u.inner(q) * q;
            const double nrm = u.norm();
            if (nrm <= 1e-9) continue;
            u *= Complex(1.0 / nrm, 0.0);
            // Fix the sign at the first child with a nonzero coordinate.
            for (const auto& c : children) {
                const Complex coord = u.at(c);
                if (std::abs(coord) > 1e-9) {
                    if (coord.real() < 0.0) u *= Complex(-1.0, 0.0);
                    break;
                }
            }
            u.prune(0.0);
            basis.tags.push_back(
                CokernelTag{false, v, static_cast<int>(kept.size())});
            kept.push_back(std::move(u));
        }
        if (kept.size() + 1 != m)
            throw Error("cokernel block at '" + v.display() +
                        "' has unexpected dimension");
        for (auto& q : kept) basis.vectors.push_back(std::move(q));
    }
    return basis;
}

AnalyticModel::AnalyticModel(WeightedShift S)
    : S_(std::move(S)), dual_(S_.cauchy_dual()), E_(cokernel_basis(S_)) {}

Eigen::VectorXcd AnalyticModel::coordinates(const SparseVector& f) const {
    Eigen::VectorXcd out(E_.dim());
    for (int a = 0; a < E_.dim(); ++a) out(a) = f.inner(E_.vectors[a]);
    return out;
}

Eigen::MatrixXcd AnalyticModel::coefficient_block(std::int64_t j, std::int64_t k) const {
    if (j < 0 || k < 0) throw InvalidParam("block indices must be non-negative");
    const int d = E_.dim();
    std::vector<SparseVector> pk(E_.vectors.begin(), E_.vectors.end());
    std::vector<SparseVector> pj = pk;
    for (auto& f : pk) f = dual_.apply_power(std::move(f), k);
    for (auto& f : pj) f = dual_.apply_power(std::move(f), j);
    Eigen::MatrixXcd C(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) C(a, b) = pk[b].inner(pj[a]);
    return C;
}

std::map<std::pair<std::int64_t, std::int64_t>, Eigen::MatrixXcd>
AnalyticModel::band_table(std::int64_t N) const {
    const int d = E_.dim();
    const std::int64_t band = band_limit();
    std::vector<std::vector<SparseVector>> powers(static_cast<std::size_t>(N) + 1);
    powers[0] = E_.vectors;
    for (std::int64_t k = 1; k <= N; ++k) {
        powers[static_cast<std::size_t>(k)].reserve(static_cast<std::size_t>(d));
        for (const auto& f : powers[static_cast<std::size_t>(k - 1)])
            powers[static_cast<std::size_t>(k)].push_back(dual_.apply(f));
    }
    std::map<std::pair<std::int64_t, std::int64_t>, Eigen::MatrixXcd> table;
    for (std::int64_t j = 0; j <= N; ++j) {
        for (std::int64_t k = std::max<std::int64_t>(0, j - band);
             k <= std::min(N, j + band); ++k) {
            Eigen::MatrixXcd C(d, d);
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                    C(a, b) = powers[static_cast<std::size_t>(k)][static_cast<std::size_t>(b)]
                                  .inner(powers[static_cast<std::size_t>(j)]
                                             [static_cast<std::size_t>(a)]);
            table.emplace(std::make_pair(j, k), std::move(C));
        }
    }
    return table;
}

Eigen::MatrixXcd AnalyticModel::kernel_partial_sum(Complex z, Complex w,
                                                   std::int64_t N) const {
    if (N < 1) throw InvalidParam("N must be >= 1");
    const int d = E_.dim();
    const std::int64_t band = band_limit();
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Identity(d, d);

    std::vector<std::vector<SparseVector>> powers(static_cast<std::size_t>(N) + 1);
    powers[0] = E_.vectors;
    for (std::int64_t k = 1; k <= N; ++k) {
        powers[static_cast<std::size_t>(k)].reserve(static_cast<std::size_t>(d));
        for (const auto& f : powers[static_cast<std::size_t>(k - 1)])
            powers[static_cast<std::size_t>(k)].push_back(dual_.apply(f));
    }
    std::vector<Complex> zp(static_cast<std::size_t>(N) + 1),
        wp(static_cast<std::size_t>(N) + 1);
    zp[0] = wp[0] = Complex(1.0, 0.0);
    for (std::int64_t i = 1; i <= N; ++i) {
        zp[static_cast<std::size_t>(i)] = zp[static_cast<std::size_t>(i - 1)] * z;
        wp[static_cast<std::size_t>(i)] =
            wp[static_cast<std::size_t>(i - 1)] * std::conj(w);
    }
    for (std::int64_t j = 1; j <= N; ++j) {
        for (std::int64_t k = std::max<std::int64_t>(1, j - band);
             k <= std::min(N, j + band); ++k) {
            const Complex scale = zp[static_cast<std::size_t>(j)] *
                                  wp[static_cast<std::size_t>(k)];
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                    sum(a, b) += scale *
                                 powers[static_cast<std::size_t>(k)]
                                       [static_cast<std::size_t>(b)]
                                           .inner(powers[static_cast<std::size_t>(j)]
                                                      [static_cast<std::size_t>(a)]);
        }
    }
    return sum;
}

RadiusEstimate AnalyticModel::radius_of_convergence(std::int64_t N) const {
    if (N < 1) throw InvalidParam("N must be >= 1");
    const DirectedTreeSpec& tree = S_.tree();

    RadiusEstimate est;
    est.a.reserve(static_cast<std::size_t>(N));
    for (std::int64_t n = 1; n <= N; ++n) {
        double log_sum = -std::numeric_limits<double>::infinity();
        for (const auto& v : tree.window(n)) {
            auto lg = dual_.log_upward_product(v, n);
            if (lg) log_sum = log_add_exp(log_sum, 2.0 * *lg);
        }
        est.a.push_back(std::exp(-log_sum / (2.0 * static_cast<double>(n))));
    }

    double tail_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = est.a.size() / 2; i < est.a.size(); ++i)
        tail_min = std::min(tail_min, est.a[i]);
    est.liminf_estimate = tail_min;

    if (S_.all_rays_periodic()) {
        // Along each ray the dual tail is the reciprocal of the primal tail,
        // so a_n converges to the smallest primal period geometric mean.
        double lim = std::numeric_limits<double>::infinity();
        for (const auto& [id, seq] : S_.weights().ray_weights) {
            double s = 0.0;
            const auto p = static_cast<std::int64_t>(seq.prefix.size());
            const auto q = static_cast<std::int64_t>(seq.period.size());
            for (std::int64_t i = 0; i < q; ++i) s += std::log(seq.at(p + i));
            lim = std::min(lim, std::exp(s / static_cast<double>(q)));
        }
        est.exact_limit = lim;
    }

    const GrowthEstimate dual_growth =
        dual_.spectral_radius(std::min<std::int64_t>(std::max<std::int64_t>(N, 32), 512));
    if (dual_growth.exact_limit) {
        est.lower_bound = 1.0 / *dual_growth.exact_limit;
        est.lower_bound_exact = true;
    } else {
        est.lower_bound = 1.0 / dual_growth.roots.back();
        est.lower_bound_exact = false;
    }
    return est;
}

double AnalyticModel::evaluation_radius() const {
    const RadiusEstimate est = radius_of_convergence(48);
    return est.exact_limit ? *est.exact_limit : est.liminf_estimate;
}

ModelCoefficients AnalyticModel::model_coefficients(const SparseVector& f) const {
    ModelCoefficients mc;
    const std::int64_t top = max_generation(S_.tree(), f);
    SparseVector g = f;
    for (std::int64_t n = 0; n <= top; ++n) {
        mc.coeffs.push_back(coordinates(g));
        g = dual_.apply_adjoint(g);
    }
    return mc;
}

BasisPolynomial AnalyticModel::basis_polynomial(const VertexId& u) const {
    BasisPolynomial poly;
    poly.vertex = u;
    poly.degree = S_.tree().generation_of(u);
    SparseVector g = SparseVector::basis(u);
    for (std::int64_t k = 0; k <= poly.degree; ++k) {
        Eigen::VectorXcd coords = coordinates(g);
        if (coords.norm() > 0.0) poly.terms.emplace_back(k, std::move(coords));
        g = dual_.apply_adjoint(g);
    }
    return poly;
}

ReproducingCheck AnalyticModel::reproducing_check(const SparseVector& f, int g_index,
                                                  Complex w, std::int64_t N) const {
    if (g_index < 0 || g_index >= E_.dim())
        throw InvalidParam("basis index out of range");
    if (N < 1) throw InvalidParam("N must be >= 1");
    const double r = evaluation_radius();
    if (!(std::abs(w) < r))
        throw OutsideDisc("|w| = " + std::to_string(std::abs(w)) +
                          " is not inside the estimated disc of radius " +
                          std::to_string(r));

    const SparseVector& g = E_.vectors[static_cast<std::size_t>(g_index)];

    // <U_f(w), g> summed over the finitely many nonzero coefficients.
    Complex lhs(0.0, 0.0);
    {
        const std::int64_t top = max_generation(S_.tree(), f);
        SparseVector h = f;
        Complex wn(1.0, 0.0);
        for (std::int64_t n = 0; n <= top; ++n) {
            lhs += wn * h.inner(g);
            h = dual_.apply_adjoint(h);
            wn *= w;
        }
    }

    // <f, sum_{k<=N} conj(w)^k S'^k g>.
    Complex rhs(0.0, 0.0);
    {
        SparseVector h = g;
        Complex wk(1.0, 0.0);
        for (std::int64_t k = 0; k <= N; ++k) {
            rhs += wk * f.inner(h);
            h = dual_.apply(h);
            wk *= w;
        }
    }

    ReproducingCheck out;
    out.residual = std::abs(lhs - rhs);
    const double B = dual_.operator_norm();
    const double rho = std::abs(w) * B;
    out.tail_bound = rho < 1.0 ? f.norm() * std::pow(rho, static_cast<double>(N + 1)) /
                                     (1.0 - rho)
                               : std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace shifttree
