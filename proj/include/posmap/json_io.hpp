#pragma once

// JSON serialization: matrices as {"rows": R, "cols": C, "data": [[re, im],
// ...]} in row-major order, map specifications resolved to MapRep, and the
// machine-readable report envelope with an input digest, the seed, and
// tolerances for auditability.

#include <chrono>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "posmap/bidual.hpp"
#include "posmap/cone.hpp"
#include "posmap/pipeline.hpp"
#include "posmap/woronowicz.hpp"

namespace posmap {

using Json = nlohmann::json;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Json matrix_to_json(const Matrix& a) {
    Json data = Json::array();
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            data.push_back({a(i, j).real(), a(i, j).imag()});
    return Json{{"rows", a.rows()}, {"cols", a.cols()}, {"data", std::move(data)}};
}

inline Matrix matrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw ParseError("matrix: expected object with rows, cols, data");
    const Index rows = j.at("rows").get<Index>();
    const Index cols = j.at("cols").get<Index>();
    const auto& data = j.at("data");
    if (rows < 0 || cols < 0 || !data.is_array() ||
        static_cast<Index>(data.size()) != rows * cols)
        throw ParseError("matrix: data length " + std::to_string(data.size()) +
                         " does not match shape " + std::to_string(rows) + "x" +
                         std::to_string(cols));
    Matrix a(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j2 = 0; j2 < cols; ++j2) {
            const auto& e = data[static_cast<size_t>(i * cols + j2)];
            if (!e.is_array() || e.size() != 2)
                throw ParseError("matrix: entries must be [re, im] pairs");
            a(i, j2) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    return a;
}

/// Resolves a map specification. Kinds: ad {"s"}, ad_transpose {"s"} (Ad_s
/// after the transpose), identity {"dim"}, transpose {"dim"}, embed_S
/// {"r","n"}, compress_T {"m","r"}, choi {"m","n","choi"}, compose {"maps"}
/// where ["f","g"] means f o g (rightmost applied first).
inline MapRep map_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ParseError("map: expected object with a kind field");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "ad") return ad(matrix_from_json(j.at("s")));
    if (kind == "ad_transpose") {
        const Matrix s = matrix_from_json(j.at("s"));
        return compose(ad(s), transpose_map(s.rows()));
    }
    if (kind == "identity") return identity_map(j.at("dim").get<Index>());
    if (kind == "transpose") return transpose_map(j.at("dim").get<Index>());
    if (kind == "embed_S")
        return st_maps(j.at("r").get<Index>(), j.at("n").get<Index>()).first;
    if (kind == "compress_T")
        return st_maps(j.at("r").get<Index>(), j.at("m").get<Index>()).second;
    if (kind == "choi")
        return map_of_choi(matrix_from_json(j.at("choi")), j.at("m").get<Index>(),
                           j.at("n").get<Index>());
    if (kind == "compose") {
        const auto& maps = j.at("maps");
        if (!maps.is_array() || maps.empty())
            throw ParseError("compose: maps must be a nonempty array");
        MapRep acc = map_from_json(maps.back());
        for (Index i = static_cast<Index>(maps.size()) - 2; i >= 0; --i)
            acc = compose(map_from_json(maps[static_cast<size_t>(i)]), acc);
        return acc;
    }
    throw ParseError("map: unknown kind '" + kind + "'");
}

/// FNV-1a 64-bit digest of the raw input text, hex encoded.
inline std::string fnv1a_digest(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline Json tolerance_to_json(const Tolerance& tol) {
    return Json{{"rank_tol", tol.rank_tol}, {"entry_tol", tol.entry_tol}};
}

inline const char* to_string(WoronowiczVerdict v) {
    switch (v) {
        case WoronowiczVerdict::exposed_by_theorem: return "exposed_by_theorem";
        case WoronowiczVerdict::condition_fails: return "condition_fails";
        default: return "not_unital_or_irreducible_but_condition_holds";
    }
}

inline const char* to_string(ConeMethod m) {
    switch (m) {
        case ConeMethod::closed_form: return "closed_form";
        case ConeMethod::alternating_minimization: return "alternating_minimization";
        case ConeMethod::psd_check: return "psd_check";
        default: return "ppt_check";
    }
}

inline Json verdict_to_json(const ConeVerdict& v) {
    Json j{{"member", v.member}, {"margin", v.margin}, {"method", to_string(v.method)}};
    auto vec_json = [](const Vector& x) {
        Json d = Json::array();
        for (Index i = 0; i < x.size(); ++i) d.push_back({x(i).real(), x(i).imag()});
        return d;
    };
    if (v.certificate_xi) j["certificate_xi"] = vec_json(*v.certificate_xi);
    if (v.certificate_eta) j["certificate_eta"] = vec_json(*v.certificate_eta);
    return j;
}

inline Json report_to_json(const WoronowiczReport& r) {
    return Json{{"dim_ker_hat", r.dim_ker_hat},
                {"dim_N", r.dim_n},
                {"condition_holds", r.condition_holds},
                {"hat_residual", r.hat_residual},
                {"span_residual", r.span_residual},
                {"unital", r.unital},
                {"commutant_dim", r.commutant_dim},
                {"irreducible", r.irreducible},
                {"verdict", to_string(r.verdict)}};
}

inline Json result_to_json(const BidualResult& b) {
    return Json{{"dimension", b.dimension},
                {"empty_variety", b.empty_variety},
                {"sample_count", b.sample_count}};
}

inline Json report_to_json(const PipelineReport& r) {
    return Json{{"rank", r.reduction.r},
                {"reconstruction_residual", r.reconstruction_residual},
                {"sigma_bidual", result_to_json(r.sigma_bidual)},
                {"identity_criterion", report_to_json(r.identity_report)},
                {"embed_hypotheses", report_to_json(r.embed_report)},
                {"compress_hypotheses", report_to_json(r.compress_report)},
                {"direct_bidual", result_to_json(r.direct_bidual)},
                {"transpose_bidual", result_to_json(r.transpose_bidual)},
                {"stable", r.stable},
                {"unstable_step", r.unstable_step},
                {"budget", r.budget},
                {"verdict", r.verdict}};
}

/// Assembles the report envelope written by --json.
inline Json make_report(const std::string& command, const std::string& input_text,
                        Json results, std::uint64_t seed, const Tolerance& tol,
                        double timing_ms) {
    return Json{{"command", command},
                {"inputs_digest", fnv1a_digest(input_text)},
                {"results", std::move(results)},
                {"seed", seed},
                {"tolerances", tolerance_to_json(tol)},
                {"timing_ms", timing_ms}};
}

}  // namespace posmap
