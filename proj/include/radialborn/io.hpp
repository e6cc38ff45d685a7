// SPDX-License-Identifier: Apache-2.0
#ifndef RADIALBORN_IO_HPP
#define RADIALBORN_IO_HPP

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "radialborn/born.hpp"
#include "radialborn/conductivity.hpp"
#include "radialborn/forward.hpp"

namespace rb::io {

using nlohmann::json;

/// Locale-independent shortest round-trip formatting.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc()) throw SchemaError("malformed number: '" + s + "'");
    return v;
}

/// FNV-1a digest of a file's bytes, for run manifests.
inline std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "missing";
    std::uint64_t h = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

/// Per-run provenance record, written as a sidecar next to each output so
/// payloads stay byte-identical across reruns.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> inputs; // path -> digest
    std::map<std::string, double> tolerances;
    std::uint64_t seed = 0;
    double wall_clock_s = 0.0;

    void add_input(const std::string& path) { inputs[path] = file_digest(path); }

    json to_json() const {
        json j;
        j["command"] = command;
        j["artifact_version"] = version;
        j["inputs"] = inputs;
        j["tolerances"] = tolerances;
        j["seed"] = seed;
        j["wall_clock_s"] = wall_clock_s;
        return j;
    }
};

inline void write_manifest(const std::string& out_path, const RunManifest& m) {
    std::ofstream out(out_path + ".manifest.json");
    out << m.to_json().dump(2) << "\n";
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SchemaError("cannot open output file: " + path);
    out << text;
}

// ---------------------------------------------------------------- CSV --

inline std::string spectrum_csv(const DtnSpectrum& s) {
    std::ostringstream os;
    os << "k,lambda,err_estimate,route\n";
    for (int k = 0; k <= s.k_max(); ++k)
        os << k << ',' << format_double(s.lambda[k]) << ','
           << format_double(s.error_estimate[k]) << ',' << route_name(s.route) << "\n";
    return os.str();
}

inline DtnSpectrum read_spectrum_csv(const std::string& path, int d) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open spectrum file: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("k,lambda", 0) != 0)
        throw SchemaError("spectrum CSV must start with header 'k,lambda,err_estimate,route'");
    DtnSpectrum s;
    s.d = d;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() < 3) throw SchemaError("spectrum CSV row with fewer than 3 fields");
        const int k = static_cast<int>(parse_double(fields[0]));
        // files written with --route both hold one block per route; keep
        // the first block
        if (k == 0 && !s.lambda.empty()) break;
        if (k != static_cast<int>(s.lambda.size()))
            throw SchemaError("spectrum CSV rows must be consecutive in k starting at 0");
        s.lambda.push_back(parse_double(fields[1]));
        s.error_estimate.push_back(parse_double(fields[2]));
        if (fields.size() >= 4 && fields[3] == "schrodinger-halfline")
            s.route = Route::schrodinger_halfline;
        else if (fields.size() >= 4 && fields[3] == "closed-form")
            s.route = Route::closed_form;
    }
    if (s.lambda.size() < 2) throw SchemaError("spectrum CSV holds fewer than 2 modes");
    return s;
}

inline std::string born_csv(const BornApproximation& born, const std::vector<double>& grid) {
    std::ostringstream os;
    os << "r,gammaB,vB,confidence\n";
    for (double r : grid)
        os << format_double(r) << ',' << format_double(born.gammaB.eval(r)) << ','
           << format_double(born.vB.jet(r).v) << ',' << format_double(born.confidence(r)) << "\n";
    return os.str();
}

struct BornCsv {
    std::vector<double> r, gammaB, vB, confidence;
};

inline BornCsv read_born_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open born file: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("r,gammaB", 0) != 0)
        throw SchemaError("born CSV must start with header 'r,gammaB,vB,confidence'");
    BornCsv out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<double> vals;
        while (std::getline(row, field, ',')) vals.push_back(parse_double(field));
        if (vals.size() < 2) throw SchemaError("born CSV row with fewer than 2 fields");
        out.r.push_back(vals[0]);
        out.gammaB.push_back(vals[1]);
        out.vB.push_back(vals.size() > 2 ? vals[2] : 0.0);
        out.confidence.push_back(vals.size() > 3 ? vals[3] : 1.0);
    }
    return out;
}

inline std::string profile_csv(const RadialProfile& p, const std::vector<double>& grid) {
    std::ostringstream os;
    os << "r,value\n";
    for (double r : grid) os << format_double(r) << ',' << format_double(p.jet(r).v) << "\n";
    return os.str();
}

// --------------------------------------------------------- spec JSON --

/// ConductivitySpec schema:
///   { "d": int,
///     "family": { "name": "example" | "piecewise" | "samples", ... },
///     "K": float, "N": float, "p": float | "inf" }
inline ConductivitySpec spec_from_json(const json& j) {
    auto require = [&](const json& obj, const char* field) -> const json& {
        if (!obj.contains(field))
            throw SchemaError(std::string("conductivity spec: missing field '") + field + "'");
        return obj.at(field);
    };
    const int d = require(j, "d").get<int>();
    require_dimension(d);
    const json& fam = require(j, "family");
    const std::string name = require(fam, "name").get<std::string>();

    std::optional<ConductivitySpec> spec;
    if (name == "example") {
        const double mu = require(fam, "mu").get<double>();
        const double nu = require(fam, "nu").get<double>();
        spec = example_family(d, mu, nu).spec;
    } else if (name == "samples") {
        auto r = require(fam, "r").get<std::vector<double>>();
        auto v = require(fam, "value").get<std::vector<double>>();
        const int order = fam.value("order", 3);
        spec = ConductivitySpec{d, RadialProfile::sampled(d, std::move(r), std::move(v), order),
                                2.0, 10.0, std::numeric_limits<double>::infinity(), {}};
    } else if (name == "piecewise") {
        auto breaks = require(fam, "breaks").get<std::vector<double>>();
        auto coeffs = require(fam, "coeffs").get<std::vector<std::vector<double>>>();
        auto node = std::make_shared<fn::PiecewisePoly>(std::move(breaks), std::move(coeffs));
        spec = ConductivitySpec{d, RadialProfile::closed_form(d, node), 2.0, 10.0,
                                std::numeric_limits<double>::infinity(), {}};
    } else {
        throw SchemaError("conductivity spec: unknown family '" + name + "'");
    }

    if (j.contains("K")) spec->K = j.at("K").get<double>();
    else spec->K = measured_ellipticity(spec->gamma);
    if (j.contains("N")) spec->N = j.at("N").get<double>();
    if (j.contains("p")) {
        const json& p = j.at("p");
        spec->p = p.is_string() ? std::numeric_limits<double>::infinity() : p.get<double>();
    }
    validate(*spec);
    return *spec;
}

inline ConductivitySpec read_spec_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open spec file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON in ") + path + ": " + e.what());
    }
    return spec_from_json(j);
}

inline json spec_to_json(const ConductivitySpec& spec) {
    json j;
    j["d"] = spec.d;
    if (spec.family) {
        j["family"] = {{"name", "example"}, {"mu", spec.family->mu}, {"nu", spec.family->nu}};
    }
    j["K"] = spec.K;
    j["N"] = spec.N;
    j["p"] = std::isinf(spec.p) ? json("inf") : json(spec.p);
    return j;
}

} // namespace rb::io

#endif
