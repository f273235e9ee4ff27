#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "json.hpp"
#include "plambda/encodings.hpp"
#include "plambda/print.hpp"
#include "plambda/smallstep.hpp"

namespace plambda::io {

using nlohmann::json;

inline json to_json(const Dyadic& d) { return json{{"num", d.numerator().str()}, {"exp", d.exponent()}}; }

/// {"entries":[{"value","num","exp"}],"mass":{"num","exp"}}; entries sorted by value text.
inline json to_json(const SubDist& d) {
    std::vector<std::pair<std::string, Dyadic>> rows;
    for (const auto& [v, m] : d) rows.emplace_back(canonical(v), m);
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    json entries = json::array();
    for (const auto& [text, m] : rows) {
        entries.push_back(json{{"value", text}, {"num", m.numerator().str()}, {"exp", m.exponent()}});
    }
    return json{{"entries", entries}, {"mass", to_json(d.mass())}};
}

/// Parses "3/8", "1/2^70", "1", "0.375", 0.375, or {"num","exp"} into an exact dyadic.
inline Dyadic dyadic_from_json(const json& j) {
    if (j.is_object()) {
        return Dyadic(BigInt(j.at("num").get<std::string>()), j.at("exp").get<std::uint64_t>());
    }
    if (j.is_number_integer()) {
        if (j.get<std::int64_t>() < 0) throw InvariantViolation("negative probability");
        return Dyadic(j.get<std::uint64_t>());
    }
    if (j.is_number_float()) {
        double x = j.get<double>();
        if (!(x >= 0.0) || !std::isfinite(x)) throw InvariantViolation("not a probability: " + j.dump());
        int e = 0;
        double m = std::frexp(x, &e);
        // x = m * 2^e with 53 significant bits
        auto mant = static_cast<std::uint64_t>(std::ldexp(m, 53));
        int shift = 53 - e;
        if (shift < 0) return Dyadic(BigInt(mant) << static_cast<unsigned>(-shift), 0);
        return Dyadic(BigInt(mant), static_cast<std::uint64_t>(shift));
    }
    if (!j.is_string()) throw InvariantViolation("not a probability: " + j.dump());
    std::string s = j.get<std::string>();
    auto slash = s.find('/');
    if (slash == std::string::npos) {
        if (s.find('.') != std::string::npos) return dyadic_from_json(json::parse(s));
        return Dyadic(BigInt(s), 0);
    }
    BigInt num(s.substr(0, slash));
    std::string den = s.substr(slash + 1);
    std::uint64_t exp = 0;
    if (den.rfind("2^", 0) == 0) {
        exp = std::stoull(den.substr(2));
    } else {
        BigInt q(den);
        if (q <= 0 || (q & (q - 1)) != 0) throw NotRepresentableError("denominator is not a power of two: " + s);
        exp = boost::multiprecision::msb(q);
    }
    return Dyadic(std::move(num), exp);
}

/// {"0": "1/2", "1": 0.5} -> distribution over naturals
inline enc::NatDist nat_dist_from_json(const json& j) {
    if (!j.is_object()) throw InvariantViolation("expected an object mapping naturals to probabilities");
    enc::NatDist out;
    for (const auto& [key, val] : j.items()) {
        std::size_t used = 0;
        std::uint64_t n = std::stoull(key, &used);
        if (used != key.size()) throw InvariantViolation("not a natural number: " + key);
        out[n] += dyadic_from_json(val);
    }
    return out;
}

}  // namespace plambda::io
