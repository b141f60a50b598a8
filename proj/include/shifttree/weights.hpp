#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "shifttree/tree.hpp"
#include "shifttree/vertex.hpp"

namespace shifttree {

// Weight of the d-th vertex along a ray: explicit prefix values first, then
// either a periodic tail or a named generator.  When invert_tail is set the
// tail values are reciprocals of the underlying sequence (the form taken by
// Cauchy-dual weights along a generator-backed ray).
struct RayWeightSeq {
    std::vector<double> prefix;
    std::vector<double> period;    // non-empty unless a generator is named
    std::string generator;         // e.g. "dyadic_blocks"
    bool invert_tail = false;

    bool periodic() const { return generator.empty(); }
    double at(std::int64_t d) const;

    static RayWeightSeq constant(double w) { return {{}, {w}, {}, false}; }
};

// Value of a named generator sequence at ray depth d (0-based).
// "dyadic_blocks": 1,1,1,1 then 1/2 on the index blocks [2^n+1, 3*2^(n-1)]
// for n >= 2 (1-based indexing along the ray), 1 elsewhere.
double generator_value(const std::string& name, std::int64_t d);
bool generator_known(const std::string& name);

// Inclusive value range of a generator over all depths.
std::pair<double, double> generator_bounds(const std::string& name);

struct WeightAssignment {
    std::map<std::string, double> core_weights;      // non-root core vertex -> weight
    std::map<std::string, RayWeightSeq> ray_weights;  // ray id -> sequence
};

// Weights making every column norm exactly 1: each vertex u with m children
// gives each child weight 1/sqrt(m).
WeightAssignment isometric_weights(const DirectedTreeSpec& tree);

// Weight 1 on core vertices; ray number i (in canonical attachment order)
// gets the constant tail 1 + i/4.  Distinct tails keep all kernel band
// offsets allowed by the tree realized.
WeightAssignment default_weights(const DirectedTreeSpec& tree);

// Throws SpecParseError when a weight is missing, negative, or refers to an
// unknown vertex/ray (zero weights pass validation; left-invertibility is
// checked separately).
void validate_weights(const DirectedTreeSpec& tree, const WeightAssignment& w);

}  // namespace shifttree
