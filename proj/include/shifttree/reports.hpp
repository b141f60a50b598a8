#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "shifttree/spec_io.hpp"
#include "shifttree/verify.hpp"

namespace shifttree {

using OrderedJson = nlohmann::ordered_json;

struct ReportConfig {
    std::int64_t n_band = 12;
    std::int64_t n_radius = 60;
    std::int64_t depth = 12;
    std::int64_t fan_d = 5;
    double tol = 1e-12;
};

// "diagonal", "tridiagonal", "pentadiagonal", "septadiagonal", then
// "(2k+1)-diagonal".
std::string bandwidth_name(std::int64_t max_offset);

OrderedJson tree_report(const LoadedSpec& spec, const ReportConfig& cfg);
OrderedJson model_report(const LoadedSpec& spec, const ReportConfig& cfg);
OrderedJson spectra_report(const LoadedSpec& spec, const ReportConfig& cfg);
OrderedJson table1_report(const ReportConfig& cfg);
OrderedJson verify_report_json(const VerifyReport& rep);

std::string render_json(const OrderedJson& j);
std::string render_text(const OrderedJson& j);
std::string render_csv(const OrderedJson& j);

}  // namespace shifttree
