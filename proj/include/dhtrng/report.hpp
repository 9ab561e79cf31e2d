#pragma once

#include <map>
#include <string>
#include <vector>

#include "dhtrng/experiment.hpp"
#include "dhtrng/stats.hpp"

namespace dhtrng::report {

std::string verdict_to_string(stats::Verdict v);

// Battery report bundle written by the test command.
struct TestBundle {
    std::vector<stats::TestReport> tests;
    std::vector<stats::MinEntropyEstimate> estimates;
    std::vector<double> acf_coefficients;  // lag i+1 at index i; empty if unused
    std::map<std::string, std::string> meta;
};

// Single top-level JSON object with schema_version "1".
std::string bundle_to_json(const TestBundle& bundle);

// RFC-4180 CSV (CRLF line endings, quoted fields where needed).
std::string bundle_to_csv(const TestBundle& bundle);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace dhtrng::report
