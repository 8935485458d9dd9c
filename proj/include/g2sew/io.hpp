#pragma once

// Text and JSON rendering.  Rationals are always written as "p/q" strings;
// JSON series round-trip exactly through series_from_json.

#include <g2sew/zhu.hpp>

#include <json.hpp>

#include <sstream>
#include <string>
#include <type_traits>

namespace g2sew {

using json = nlohmann::ordered_json;

namespace detail {

inline std::string power_text(const std::string& var, int n) {
    if (n == 0) return "";
    if (n == 1) return var;
    return var + "^" + std::to_string(n);
}

inline std::string offset_text(const std::string& var, const Rational& off) {
    if (off == 1) return var;
    return var + "^(" + to_string(off) + ")";
}

/// Joins signed terms: each term is (negative?, magnitude text).
inline std::string join_terms(const std::vector<std::pair<bool, std::string>>& terms) {
    std::string out;
    for (const auto& [neg, body] : terms) {
        if (out.empty())
            out = (neg ? "-" : "") + body;
        else
            out += (neg ? " - " : " + ") + body;
    }
    return out;
}

inline std::pair<bool, std::string> coeff_term(const Rational& c, const std::string& mono) {
    const bool neg = sgn(c) < 0;
    const Rational mag = abs(c);
    if (mono.empty()) return {neg, to_string(mag)};
    if (mag == 1) return {neg, mono};
    return {neg, to_string(mag) + "*" + mono};
}

}  // namespace detail

inline std::string to_text(const Rational& r) { return to_string(r); }

template <class R>
std::string to_text(const CPoly<R>& p);

template <class R>
std::string to_text(const Series<R>& s) {
    const std::string v = var_name(s.var());
    std::vector<std::pair<bool, std::string>> terms;
    for (int n = 0; n < s.size(); ++n) {
        const R& c = s.coeffs()[static_cast<std::size_t>(n)];
        if (is_zero(c) && is_exact_zero(c)) continue;
        const std::string mono = detail::power_text(v, n);
        if constexpr (std::is_same_v<R, Rational>) {
            if (is_zero(c)) continue;
            terms.push_back(detail::coeff_term(c, mono));
        } else {
            std::string body = "(" + to_text(c) + ")";
            terms.push_back({false, mono.empty() ? body : body + "*" + mono});
        }
    }
    if (!s.is_exact()) terms.push_back({false, "O(" + detail::power_text(v, trunc_add(s.trunc(), 1)) + ")"});
    std::string body = terms.empty() ? "0" : detail::join_terms(terms);
    if (s.offset() != 0 && !s.is_exact_zero()) return detail::offset_text(v, s.offset()) + "*(" + body + ")";
    return body;
}

template <class R>
std::string to_text(const CPoly<R>& p) {
    std::vector<std::pair<bool, std::string>> terms;
    for (int j = 0; j <= p.degree(); ++j) {
        const R& c = p.coeffs()[static_cast<std::size_t>(j)];
        if (is_zero(c)) continue;
        const std::string mono = detail::power_text("C", j);
        if constexpr (std::is_same_v<R, Rational>) {
            terms.push_back(detail::coeff_term(c, mono));
        } else {
            std::string body = "(" + to_text(c) + ")";
            terms.push_back({false, mono.empty() ? body : body + "*" + mono});
        }
    }
    return terms.empty() ? "0" : detail::join_terms(terms);
}

inline std::string to_text(const VirState& v) {
    if (v.is_zero()) return "0";
    std::vector<std::pair<bool, std::string>> terms;
    for (const auto& [p, c] : v.terms()) {
        std::string coeff = to_text(c);
        const bool simple = c.degree() == 0;
        if (simple) {
            auto t = detail::coeff_term(c.coeff(0), "");
            terms.push_back({t.first, t.second + " * " + p.to_string()});
        } else {
            terms.push_back({false, "(" + coeff + ") * " + p.to_string()});
        }
    }
    return detail::join_terms(terms);
}

/// Renders a q-series as a quasi-modular polynomial of weights <= max_weight
/// when that decomposition exists, otherwise as a q-expansion.
inline std::string quasimodular_text(const QSeries& s, int max_weight) {
    if (s.is_zero() && s.offset() == 0) return "0";
    if (s.is_exact() && s.size() <= 1) return to_string(s.coeff(0));
    // Smallest weight range first: fewer unknowns stay determined at low q-order.
    for (int w = 0; w <= max_weight; w += 2) {
        try {
            return to_quasimodular_upto(s.with_var(Var::q), w).to_string();
        } catch (const not_quasimodular_error&) {
            continue;
        } catch (const series_error&) {
            break;
        }
    }
    return to_text(s);
}

/// Operator text with coefficients written in E2, E4, E6 where possible,
/// e.g. "d^2 + 2*E2*d + 1/2*E4*C".
inline std::string to_text(const DiffOp& op, int weight_hint = -1) {
    if (op.is_zero()) return "0";
    std::vector<std::pair<bool, std::string>> terms;
    for (auto it = op.terms().rbegin(); it != op.terms().rend(); ++it) {
        const auto& [k, c] = *it;
        const auto& [i, j] = k;
        const int w = weight_hint >= 0 ? std::max(weight_hint - 2 * i, 0) : 12;
        std::string coeff = quasimodular_text(c, w);
        std::string mono;
        if (j > 0) mono = detail::power_text("C", j);
        if (i > 0) mono += (mono.empty() ? "" : "*") + detail::power_text("d", i);
        const bool compound = coeff.find_first_of("+ ") != std::string::npos || coeff.find(" - ") != std::string::npos;
        if (coeff == "1" && !mono.empty()) {
            terms.push_back({false, mono});
        } else if (coeff == "-1" && !mono.empty()) {
            terms.push_back({true, mono});
        } else if (compound) {
            terms.push_back({false, "(" + coeff + ")" + (mono.empty() ? "" : "*" + mono)});
        } else {
            const bool neg = !coeff.empty() && coeff[0] == '-';
            const std::string mag = neg ? coeff.substr(1) : coeff;
            terms.push_back({neg, mono.empty() ? mag : mag + "*" + mono});
        }
    }
    return detail::join_terms(terms);
}

// ---------------------------------------------------------------------------
// JSON

inline json to_json(const Rational& r) { return to_string(r); }

template <class R>
json to_json(const CPoly<R>& p);

template <class R>
json to_json(const Series<R>& s) {
    json coeffs = json::object();
    for (int n = 0; n < s.size(); ++n) {
        const R& c = s.coeffs()[static_cast<std::size_t>(n)];
        if (is_exact_zero(c)) continue;
        coeffs[std::to_string(n)] = to_json(c);
    }
    json out;
    out["variable"] = var_name(s.var());
    out["offset"] = to_string(s.offset());
    out["trunc"] = s.is_exact() ? json(nullptr) : json(s.trunc());
    out["coeffs"] = std::move(coeffs);
    return out;
}

template <class R>
json to_json(const CPoly<R>& p) {
    json coeffs = json::object();
    for (int j = 0; j <= p.degree(); ++j) {
        const R& c = p.coeffs()[static_cast<std::size_t>(j)];
        if (is_exact_zero(c)) continue;
        coeffs[std::to_string(j)] = to_json(c);
    }
    return json{{"c_poly", std::move(coeffs)}};
}

template <class T>
struct json_reader;

template <>
struct json_reader<Rational> {
    static Rational read(const json& j) { return parse_rational(j.get<std::string>()); }
};

template <class R>
struct json_reader<Series<R>> {
    static Series<R> read(const json& j) {
        const Var v = parse_var(j.at("variable").get<std::string>());
        const Rational off = parse_rational(j.at("offset").get<std::string>());
        const int trunc = j.at("trunc").is_null() ? kExact : j.at("trunc").get<int>();
        Series<R> out(v, trunc, off);
        for (const auto& [key, val] : j.at("coeffs").items()) out.set(std::stoi(key), json_reader<R>::read(val));
        return out.with_offset(off);
    }
};

template <class R>
struct json_reader<CPoly<R>> {
    static CPoly<R> read(const json& j) {
        CPoly<R> out;
        for (const auto& [key, val] : j.at("c_poly").items()) out.set(std::stoi(key), json_reader<R>::read(val));
        return out;
    }
};

template <class T>
T from_json(const json& j) {
    return json_reader<T>::read(j);
}

inline json to_json(const VirState& v) {
    json out = json::array();
    for (const auto& [p, c] : v.terms()) out.push_back({{"partition", p.parts()}, {"coeff", to_text(c)}});
    return out;
}

inline json to_json(const DiffOp& op) {
    json terms = json::array();
    for (const auto& [k, c] : op.terms())
        terms.push_back({{"d_order", k.first}, {"c_degree", k.second}, {"series", to_json(c)}});
    return json{{"basis", basis_name(op.basis())}, {"q_trunc", op.q_trunc()}, {"terms", std::move(terms)}};
}

inline DiffOp diffop_from_json(const json& j) {
    const std::string b = j.at("basis").get<std::string>();
    if (b != "Z" && b != "Theta") throw std::invalid_argument("unknown basis: " + b);
    DiffOp op(b == "Z" ? Basis::z_basis : Basis::theta_basis, j.at("q_trunc").get<int>());
    for (const auto& t : j.at("terms"))
        op.add({t.at("d_order").get<int>(), t.at("c_degree").get<int>()}, from_json<QSeries>(t.at("series")));
    return op;
}

}  // namespace g2sew
