#pragma once

#include <complex>
#include <map>

#include "shifttree/vertex.hpp"

namespace shifttree {

using Complex = std::complex<double>;

// Finitely supported complex function on the vertex set.  Entries are kept
// in a sorted map so that iteration (and therefore every accumulated sum)
// is deterministic.
class SparseVector {
public:
    using Map = std::map<VertexId, Complex>;

    SparseVector() = default;

    static SparseVector basis(const VertexId& v) {
        SparseVector e;
        e.entries_[v] = Complex(1.0, 0.0);
        return e;
    }

    Complex at(const VertexId& v) const {
        auto it = entries_.find(v);
        return it == entries_.end() ? Complex(0.0, 0.0) : it->second;
    }

    void set(const VertexId& v, Complex value) {
        if (value == Complex(0.0, 0.0))
            entries_.erase(v);
        else
            entries_[v] = value;
    }

    void add(const VertexId& v, Complex value) { entries_[v] += value; }

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    Map::const_iterator begin() const { return entries_.begin(); }
    Map::const_iterator end() const { return entries_.end(); }

    // <f, g> = sum_v f(v) * conj(g(v)); iterates the smaller support.
    Complex inner(const SparseVector& g) const {
        const SparseVector* a = this;
        const SparseVector* b = &g;
        bool swapped = false;
        if (b->size() < a->size()) {
            std::swap(a, b);
            swapped = true;
        }
        Complex sum(0.0, 0.0);
        for (const auto& [v, value] : a->entries_) {
            auto it = b->entries_.find(v);
            if (it == b->entries_.end()) continue;
            sum += swapped ? it->second * std::conj(value)
                           : value * std::conj(it->second);
        }
        return sum;
    }

    double squared_norm() const {
        double s = 0.0;
        for (const auto& [v, value] : entries_) s += std::norm(value);
        return s;
    }

    double norm() const { return std::sqrt(squared_norm()); }

    SparseVector& operator+=(const SparseVector& g) {
        for (const auto& [v, value] : g.entries_) entries_[v] += value;
        return *this;
    }

    SparseVector& operator-=(const SparseVector& g) {
        for (const auto& [v, value] : g.entries_) entries_[v] -= value;
        return *this;
    }

    SparseVector& operator*=(Complex c) {
        for (auto& [v, value] : entries_) value *= c;
        return *this;
    }

    friend SparseVector operator+(SparseVector f, const SparseVector& g) {
        f += g;
        return f;
    }
    friend SparseVector operator-(SparseVector f, const SparseVector& g) {
        f -= g;
        return f;
    }
    friend SparseVector operator*(Complex c, SparseVector f) {
        f *= c;
        return f;
    }

    // Removes entries that are exactly zero (or below an explicit threshold).
    void prune(double threshold = 0.0) {
        for (auto it = entries_.begin(); it != entries_.end();) {
            if (std::abs(it->second) <= threshold)
                it = entries_.erase(it);
            else
                ++it;
        }
    }

    friend bool operator==(const SparseVector&, const SparseVector&) = default;

private:
    Map entries_;
};

}  // namespace shifttree
