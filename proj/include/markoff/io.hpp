#pragma once

// JSON encoding shared by the CLI and tests. Integers and rationals are
// decimal strings so nothing is lost to double precision.

#include <json.hpp>

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "markoff/core/error.hpp"
#include "markoff/core/rational.hpp"
#include "markoff/divisibility.hpp"
#include "markoff/isomorph.hpp"
#include "markoff/mt_matrices.hpp"
#include "markoff/tree.hpp"
#include "markoff/verify.hpp"

namespace markoff::io {

using json = nlohmann::ordered_json;

inline json to_json(const BigInt& v) { return to_string(v); }
inline json to_json(const Rational& v) { return v.str(); }

template <class T, std::size_t N>
json to_json(const Matrix<T, N>& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < N; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < N; ++j) row.push_back(to_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline json to_json(const Vec3& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(to_json(x));
    return out;
}

inline Mat3 mat3_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw parse_error("matrix must be a 3x3 array");
    Mat3 m;
    for (std::size_t r = 0; r < 3; ++r) {
        if (!j[r].is_array() || j[r].size() != 3) throw parse_error("matrix row must have 3 entries");
        for (std::size_t c = 0; c < 3; ++c) {
            const json& e = j[r][c];
            m(r, c) = e.is_string() ? Rational::parse(e.get<std::string>()) : Rational(BigInt(e.get<long>()));
        }
    }
    return m;
}

inline json to_json(const Arrangement& x) { return {{"a", to_json(x.a)}, {"b", to_json(x.b)}, {"c", to_json(x.c)}}; }
inline json to_json(const MTMatrix& x) { return to_json(x.arr()); }

inline json triple_record(const TreeRecord& rec, bool classical_view) {
    const auto& t = rec.triple;
    auto cl = to_classical(t);
    json j;
    if (classical_view) {
        j["x"] = to_json(cl[0]);
        j["y"] = to_json(cl[1]);
        j["z"] = to_json(cl[2]);
        j["normalized"] = {to_json(t.x()), to_json(t.y()), to_json(t.z())};
    } else {
        j["x"] = to_json(t.x());
        j["y"] = to_json(t.y());
        j["z"] = to_json(t.z());
        j["classical"] = {to_json(cl[0]), to_json(cl[1]), to_json(cl[2])};
    }
    j["path"] = rec.path.str();
    return j;
}

inline json to_json(const IsomorphParams& p) { return {{"s", to_json(p.s)}, {"t", to_json(p.t)}}; }

inline json to_json(const PairContext& c) {
    return {{"arr1", to_json(c.arr1)}, {"arr2", to_json(c.arr2)}, {"m", to_json(c.m)},
            {"r", to_json(c.r)},       {"alpha", to_json(c.alpha)}, {"frak_m", to_json(c.frak_m)},
            {"even", c.even()},        {"dominant", c.dominant}};
}

inline json to_json(const FGFactorization& fg) {
    return {{"m", to_json(fg.m)}, {"frak_m", to_json(fg.frak_m)}, {"f", to_json(fg.f)}, {"g", to_json(fg.g)},
            {"X", to_json(fg.X)}, {"Y", to_json(fg.Y)}, {"residual_23", to_json(fg.residual)}, {"degenerate", fg.degenerate}};
}

inline json to_json(const LemmaAudit& la) {
    json primes = json::array();
    for (const auto& p : la.primes)
        primes.push_back({{"q", to_json(p.q)}, {"l", p.l}, {"prime_split", p.split_aa && p.split_ac},
                          {"x_iff_yplus", p.x_iff_yplus}, {"y_iff_xplus", p.y_iff_xplus}, {"square_split", p.square_split}});
    return {{"prime_split", verdict_name(la.prime_split)},   {"x_iff_yplus", verdict_name(la.x_iff_yplus)},
            {"y_iff_xplus", verdict_name(la.y_iff_xplus)}, {"square_split", verdict_name(la.square_split)},
            {"size_bound", verdict_name(la.size_bound)},   {"size_bound_detail", la.size_bound_detail},
            {"primes", primes}};
}

inline json to_json(const IntegralParameter& ip) {
    return {{"s", to_json(ip.s)},           {"n", to_json(ip.n)},
            {"denominator", to_json(ip.denominator)}, {"gcd_n_core", to_json(ip.gcd_core)},
            {"coprime", ip.coprime},        {"s_congruence", ip.s_congruence},
            {"N", to_json(ip.N)}};
}

inline json to_json(const FrakDecomposition& fd) {
    return {{"n_plus", to_json(fd.n_plus)},
            {"n_minus", to_json(fd.n_minus)},
            {"n2", to_json(fd.n2)},
            {"reassembles", fd.reassembles},
            {"C_matches_display", fd.C_matches_display},
            {"uw_match_n", fd.uw_match_n},
            {"hypothesis_A", fd.hypothesis_A},
            {"A_zero_mod_g2", fd.A_zero_mod_g2},
            {"B_zero_mod_g2", fd.B_zero_mod_g2},
            {"C_zero_mod_g", fd.C_zero_mod_g},
            {"D_zero_mod_g", fd.D_zero_mod_g},
            {"lhs_zero_mod_g", fd.lhs_zero_mod_g},
            {"lhs_equals_D_mod_g", fd.lhs_equals_D_mod_g},
            {"N22_integral", fd.N22_integral},
            {"contradiction", fd.contradiction}};
}

inline json to_json(const SuiteReport& rep) {
    json checks = json::object(), failures = json::array();
    for (const auto& s : rep.tally.stats()) {
        checks[s.name] = s.failures ? "fail" : "pass";
        if (s.failures)
            failures.push_back({{"check", s.name}, {"failures", s.failures}, {"cases", s.cases},
                                {"counterexample", s.counterexample}});
    }
    json notes = json::object();
    for (const auto& [k, v] : rep.notes) notes[k] = v;
    return {{"suite", rep.suite}, {"status", rep.passed() ? "pass" : "fail"}, {"checks", checks},
            {"notes", notes}, {"failures", failures}};
}

/// "3,6,15" -> Arrangement
inline Arrangement parse_arrangement(std::string_view text) {
    std::vector<BigInt> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = text.find(',', start);
        parts.push_back(parse_bigint(text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (parts.size() != 3) throw parse_error("arrangement needs three comma-separated integers");
    return {parts[0], parts[1], parts[2]};
}

/// Decimal integer or "b^e" (e.g. 10^12).
inline BigInt parse_bound(std::string_view text) {
    auto caret = text.find('^');
    if (caret == std::string_view::npos) return parse_bigint(text);
    BigInt base = parse_bigint(text.substr(0, caret));
    BigInt e = parse_bigint(text.substr(caret + 1));
    if (e < 0 || e > 4096) throw parse_error("exponent out of range");
    return pow(base, e.get_ui());
}

} // namespace markoff::io
