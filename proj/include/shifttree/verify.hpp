#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shifttree/spec_io.hpp"

namespace shifttree {

struct VerifyOptions {
    std::int64_t n_band = 12;
    std::int64_t n_radius = 60;
    std::int64_t n_repro = 60;
    std::int64_t depth = 12;
    double tol = 1e-12;
};

struct CheckResult {
    std::string id;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_pass = true;

    void add(std::string id, bool pass, std::string detail = {}) {
        all_pass = all_pass && pass;
        checks.push_back({std::move(id), pass, std::move(detail)});
    }
};

// Runs every invariant suite against the loaded spec (tree, shift, model,
// spectra, and the rootless suite when a back ray is present).
VerifyReport run_verification(const LoadedSpec& spec, const VerifyOptions& opt = {});

}  // namespace shifttree
