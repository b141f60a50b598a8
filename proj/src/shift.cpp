#include "shifttree/shift.hpp"

#include <algorithm>
#include <cmath>

#include "shifttree/errors.hpp"

namespace shifttree {

namespace {

double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

WeightedShift::WeightedShift(TreePtr tree, WeightAssignment weights)
    : tree_(std::move(tree)), weights_(std::move(weights)) {
    validate_weights(*tree_, weights_);
}

double WeightedShift::weight(const VertexId& v) const {
    if (v.is_ray()) {
        auto it = weights_.ray_weights.find(v.token);
        if (it == weights_.ray_weights.end())
            throw UnknownVertex("no weights for ray '" + v.token + "'");
        return it->second.at(v.depth);
    }
    if (v == tree_->root()) throw UnknownVertex("the root carries no weight");
    auto it = weights_.core_weights.find(v.token);
    if (it == weights_.core_weights.end())
        throw UnknownVertex("no weight for vertex '" + v.display() + "'");
    return it->second;
}

SparseVector WeightedShift::apply(const SparseVector& f) const {
    SparseVector out;
    for (const auto& [u, value] : f) {
        for (const auto& c : tree_->children(u)) out.add(c, weight(c) * value);
    }
    return out;
}

SparseVector WeightedShift::apply_adjoint(const SparseVector& f) const {
    SparseVector out;
    for (const auto& [v, value] : f) {
        auto p = tree_->parent(v);
        if (p) out.add(*p, weight(v) * value);
    }
    return out;
}

SparseVector WeightedShift::apply_power(const VertexId& u, std::int64_t k) const {
    return apply_power(SparseVector::basis(u), k);
}

SparseVector WeightedShift::apply_power(SparseVector f, std::int64_t k) const {
    if (k < 0) throw InvalidParam("power must be non-negative");
    for (std::int64_t i = 0; i < k; ++i) f = apply(f);
    return f;
}

SparseVector WeightedShift::apply_adjoint_power(const VertexId& u, std::int64_t k) const {
    return apply_adjoint_power(SparseVector::basis(u), k);
}

SparseVector WeightedShift::apply_adjoint_power(SparseVector f, std::int64_t k) const {
    if (k < 0) throw InvalidParam("power must be non-negative");
    for (std::int64_t i = 0; i < k; ++i) f = apply_adjoint(f);
    return f;
}

double WeightedShift::column_norm(const VertexId& u) const {
    double s = 0.0;
    for (const auto& c : tree_->children(u)) {
        double w = weight(c);
        s += w * w;
    }
    return std::sqrt(s);
}

ColumnNormBounds WeightedShift::column_norm_bounds() const {
    ColumnNormBounds b{std::numeric_limits<double>::infinity(), 0.0};
    auto take = [&b](double v) {
        b.inf = std::min(b.inf, v);
        b.sup = std::max(b.sup, v);
    };
    for (const auto& name : tree_->core_names()) take(column_norm(VertexId::core(name)));
    // Along a ray the column norm at depth d is the weight at depth d + 1;
    // one prefix plus one full period covers every value.
    for (const auto& r : tree_->rays()) {
        const RayWeightSeq& seq = weights_.ray_weights.at(r.id);
        const auto p = static_cast<std::int64_t>(seq.prefix.size());
        if (seq.periodic()) {
            const auto q = static_cast<std::int64_t>(seq.period.size());
            for (std::int64_t i = 1; i <= p + q; ++i) take(seq.at(i));
        } else {
            for (std::int64_t i = 1; i <= p; ++i) take(seq.at(i));
            auto [lo, hi] = generator_bounds(seq.generator);
            if (seq.invert_tail) {
                const double new_lo = 1.0 / hi, new_hi = 1.0 / lo;
                lo = new_lo;
                hi = new_hi;
            }
            take(lo);
            take(hi);
        }
    }
    return b;
}

bool WeightedShift::has_positive_weights() const {
    for (const auto& [name, w] : weights_.core_weights) {
        if (!(w > 0.0)) return false;
    }
    for (const auto& [id, seq] : weights_.ray_weights) {
        for (double w : seq.prefix)
            if (!(w > 0.0)) return false;
        for (double w : seq.period)
            if (!(w > 0.0)) return false;
        if (!seq.generator.empty() && !(generator_bounds(seq.generator).first > 0.0))
            return false;
    }
    return true;
}

bool WeightedShift::left_invertible() const {
    return has_positive_weights() && column_norm_bounds().inf > 0.0;
}

void WeightedShift::require_left_invertible() const {
    if (!left_invertible())
        throw NotLeftInvertible(
            "column norms are not bounded away from zero (weights must be "
            "strictly positive)");
}

bool WeightedShift::all_rays_periodic() const {
    for (const auto& [id, seq] : weights_.ray_weights)
        if (!seq.periodic()) return false;
    return true;
}

WeightedShift WeightedShift::cauchy_dual() const {
    require_left_invertible();
    WeightAssignment dual;
    for (const auto& [name, w] : weights_.core_weights) {
        const VertexId v = VertexId::core(name);
        const auto p = tree_->parent(v);
        const double cn = column_norm(*p);
        dual.core_weights[name] = w / (cn * cn);
    }
    for (const auto& r : tree_->rays()) {
        const RayWeightSeq& seq = weights_.ray_weights.at(r.id);
        RayWeightSeq out;
        // Head weight divides by the attachment column norm; deeper vertices
        // sit below a single-child parent, so the dual weight is 1/w.
        const double cn_attach = column_norm(VertexId::core(r.attach));
        out.prefix.push_back(seq.at(0) / (cn_attach * cn_attach));
        if (seq.periodic()) {
            const auto p = static_cast<std::int64_t>(seq.prefix.size());
            const auto q = static_cast<std::int64_t>(seq.period.size());
            for (std::int64_t d = 1; d < std::max<std::int64_t>(p, 1); ++d)
                out.prefix.push_back(1.0 / seq.at(d));
            const auto np = static_cast<std::int64_t>(out.prefix.size());
            for (std::int64_t i = 0; i < q; ++i)
                out.period.push_back(1.0 / seq.at(np + i));
        } else {
            out.generator = seq.generator;
            out.invert_tail = !seq.invert_tail;
        }
        dual.ray_weights[r.id] = std::move(out);
    }
    return WeightedShift(tree_, std::move(dual));
}

std::optional<double> WeightedShift::log_upward_product(const VertexId& v,
                                                        std::int64_t n) const {
    double acc = 0.0;
    VertexId cur = v;
    std::int64_t remaining = n;
    // Sweep the ray segment without per-step tree lookups.
    if (cur.is_ray()) {
        const RayWeightSeq& seq = weights_.ray_weights.at(cur.token);
        const std::int64_t steps = std::min(remaining, cur.depth + 1);
        for (std::int64_t i = 0; i < steps; ++i) acc += std::log(seq.at(cur.depth - i));
        remaining -= steps;
        if (remaining == 0) return acc;
        cur = VertexId::core(tree_->ray_attach_of(cur.token));
    }
    while (remaining > 0) {
        if (cur == tree_->root()) return std::nullopt;
        acc += std::log(weight(cur));
        --remaining;
        cur = *tree_->parent(cur);
    }
    return acc;
}

GrowthEstimate WeightedShift::spectral_radius(std::int64_t N) const {
    if (N < 1) throw InvalidParam("N must be >= 1");
    if (!has_positive_weights())
        throw NotLeftInvertible("growth analysis requires strictly positive weights");

    // best[n] = max over start vertices u of log ||S^n e_u||.
    std::vector<double> best(static_cast<std::size_t>(N) + 1, kNegInf);

    // Per-ray log prefix sums L[m] = sum_{i<m} log(weight at depth i).
    struct RayTable {
        std::string id;
        std::int64_t starts;  // number of start depths to scan
        std::vector<double> L;
    };
    std::vector<RayTable> tables;
    for (const auto& r : tree_->rays()) {
        const RayWeightSeq& seq = weights_.ray_weights.at(r.id);
        const auto p = static_cast<std::int64_t>(seq.prefix.size());
        std::int64_t starts =
            seq.periodic() ? p + static_cast<std::int64_t>(seq.period.size()) + 1
                           : 4 * N + 16;
        RayTable t{r.id, starts, {}};
        t.L.resize(static_cast<std::size_t>(starts + N + 2), 0.0);
        for (std::size_t m = 1; m < t.L.size(); ++m)
            t.L[m] = t.L[m - 1] + std::log(seq.at(static_cast<std::int64_t>(m) - 1));
        tables.push_back(std::move(t));
    }

    // Starts inside a ray: a single path of n consecutive ray weights.
    for (const auto& t : tables) {
        for (std::int64_t d = 0; d < t.starts; ++d) {
            for (std::int64_t n = 1; n <= N; ++n) {
                const double lg = t.L[static_cast<std::size_t>(d + 1 + n)] -
                                  t.L[static_cast<std::size_t>(d + 1)];
                auto& slot = best[static_cast<std::size_t>(n)];
                slot = std::max(slot, lg);
            }
        }
    }

    // Starts at core vertices: sum path contributions in log space.
    std::map<std::string, const RayTable*> by_id;
    for (const auto& t : tables) by_id[t.id] = &t;
    for (const auto& name : tree_->core_names()) {
        std::vector<double> log_sq(static_cast<std::size_t>(N) + 1, kNegInf);
        // DFS through core descendants carrying the accumulated log product.
        struct Frame {
            std::string vertex;
            std::int64_t dist;
            double acc;
        };
        std::vector<Frame> stack{{name, 0, 0.0}};
        while (!stack.empty()) {
            Frame fr = stack.back();
            stack.pop_back();
            if (fr.dist >= 1 && fr.dist <= N) {
                auto& slot = log_sq[static_cast<std::size_t>(fr.dist)];
                slot = log_add_exp(slot, 2.0 * fr.acc);
            }
            for (const auto& rid : tree_->rays_at(fr.vertex)) {
                const RayTable* t = by_id.at(rid);
                for (std::int64_t n = fr.dist + 1; n <= N; ++n) {
                    auto& slot = log_sq[static_cast<std::size_t>(n)];
                    slot = log_add_exp(slot,
                                       2.0 * (fr.acc + t->L[static_cast<std::size_t>(n - fr.dist)]));
                }
            }
            if (fr.dist < N) {
                for (const auto& c : tree_->core_children_of(fr.vertex)) {
                    stack.push_back(
                        {c, fr.dist + 1, fr.acc + std::log(weights_.core_weights.at(c))});
                }
            }
        }
        for (std::int64_t n = 1; n <= N; ++n) {
            auto& slot = best[static_cast<std::size_t>(n)];
            slot = std::max(slot, log_sq[static_cast<std::size_t>(n)] / 2.0);
        }
    }

    GrowthEstimate est;
    est.roots.reserve(static_cast<std::size_t>(N));
    for (std::int64_t n = 1; n <= N; ++n)
        est.roots.push_back(std::exp(best[static_cast<std::size_t>(n)] /
                                     static_cast<double>(n)));

    if (all_rays_periodic()) {
        double lim = kNegInf;
        for (const auto& [id, seq] : weights_.ray_weights) {
            double s = 0.0;
            const auto p = static_cast<std::int64_t>(seq.prefix.size());
            const auto q = static_cast<std::int64_t>(seq.period.size());
            for (std::int64_t i = 0; i < q; ++i) s += std::log(seq.at(p + i));
            lim = std::max(lim, s / static_cast<double>(q));
        }
        est.exact_limit = std::exp(lim);
    }
    return est;
}

}  // namespace shifttree
