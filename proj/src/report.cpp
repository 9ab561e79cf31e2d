#include "dhtrng/report.hpp"

#include <sstream>

#include <json.hpp>

namespace dhtrng::report {

namespace {

using nlohmann::json;

// RFC-4180: quote fields containing comma, quote or line breaks.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

std::string verdict_to_string(stats::Verdict v) {
    switch (v) {
        case stats::Verdict::pass: return "pass";
        case stats::Verdict::fail: return "fail";
        case stats::Verdict::not_applicable: return "not_applicable";
    }
    return "?";
}

std::string bundle_to_json(const TestBundle& bundle) {
    json root;
    root["schema_version"] = "1";
    for (const auto& [k, v] : bundle.meta) root["meta"][k] = v;
    root["tests"] = json::array();
    for (const auto& t : bundle.tests) {
        json jt;
        jt["test_name"] = t.test_name;
        jt["statistics"] = t.statistics;
        if (t.p_value) jt["p_value"] = *t.p_value;
        if (t.bounds) {
            jt["bounds"] = {{"low", t.bounds->low},
                            {"high", t.bounds->high},
                            {"inclusive", t.bounds->inclusive}};
        }
        jt["verdict"] = verdict_to_string(t.verdict);
        jt["sample_bits"] = t.sample_bits;
        if (!t.note.empty()) jt["note"] = t.note;
        root["tests"].push_back(jt);
    }
    root["estimates"] = json::array();
    for (const auto& e : bundle.estimates) {
        root["estimates"].push_back({{"estimator", e.estimator},
                                     {"p_max", e.p_max},
                                     {"h_min", e.h_min},
                                     {"confidence_z", e.confidence_z},
                                     {"sample_bits", e.sample_bits}});
    }
    if (!bundle.acf_coefficients.empty()) {
        json rows = json::array();
        for (size_t i = 0; i < bundle.acf_coefficients.size(); ++i) {
            rows.push_back({{"lag", i + 1}, {"coefficient", bundle.acf_coefficients[i]}});
        }
        root["acf"] = rows;
    }
    return root.dump(2) + "\n";
}

std::string bundle_to_csv(const TestBundle& bundle) {
    std::ostringstream out;
    const char* eol = "\r\n";
    out << "record,name,statistic,p_value,bound_low,bound_high,verdict,sample_bits,note" << eol;
    for (const auto& t : bundle.tests) {
        out << "test," << csv_field(t.test_name) << ','
            << (t.statistics.empty() ? "" : num(t.statistics.front())) << ','
            << (t.p_value ? num(*t.p_value) : "") << ','
            << (t.bounds ? num(t.bounds->low) : "") << ','
            << (t.bounds ? num(t.bounds->high) : "") << ','
            << verdict_to_string(t.verdict) << ',' << t.sample_bits << ','
            << csv_field(t.note) << eol;
    }
    for (const auto& e : bundle.estimates) {
        out << "estimate," << csv_field(e.estimator) << ',' << num(e.h_min) << ','
            << num(e.p_max) << ",,,," << e.sample_bits << ','
            << csv_field("statistic = h_min, p_value column = p_max") << eol;
    }
    for (size_t i = 0; i < bundle.acf_coefficients.size(); ++i) {
        out << "acf,lag_" << (i + 1) << ',' << num(bundle.acf_coefficients[i]) << ",,,,,,"
            << eol;
    }
    return out.str();
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    const char* eol = "\r\n";
    out << "seed,axis_value,repeat,mcv_h_min,bias_percent,max_abs_acf" << eol;
    for (const auto& r : rows) {
        out << r.seed << ',' << num(r.axis_value) << ',' << r.repeat << ',' << num(r.mcv_h_min)
            << ',' << num(r.bias_percent) << ',' << num(r.max_abs_acf) << eol;
    }
    return out.str();
}

}  // namespace dhtrng::report
