// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <g2sew/cli.hpp>

#include <chrono>
#include <functional>
#include <iostream>

using namespace g2sew;

namespace {

Rational r(long n, long d = 1) { return make_rational(n, d); }

struct Criterion {
    int id;
    std::string title;
    double budget_seconds;
    std::function<bool(std::string&)> body;
};

VirState mono(std::vector<int> parts, const Rational& c) { return VirState::monomial(Partition(std::move(parts)), CPolynomial(c)); }

bool beta_table(std::string& detail) {
    const auto out = cli::cmd_beta(14, cli::Format::json);
    const json rows = json::parse(out.text);
    const std::vector<std::string> expected{"-1/12", "-1/480", "1/12096", "-1/138240", "1/2280960", "-389/13586227200", "1/464486400"};
    if (rows.size() != expected.size()) return false;
    for (std::size_t i = 0; i < expected.size(); ++i)
        if (rows[i]["beta"] != expected[i] || rows[i]["k"] != static_cast<int>(2 * i + 2)) {
            detail = "beta_" + std::to_string(2 * i + 2) + " = " + rows[i]["beta"].get<std::string>();
            return false;
        }
    return true;
}

bool lambda_vectors(std::string& detail) {
    const auto l = lambda_vector(12);
    bool ok = l[2] == mono({2}, r(-1, 12)) && l[4] == mono({2, 2}, r(1, 288)) + mono({4}, r(-1, 480)) &&
              l[6] == mono({2, 2, 2}, r(-1, 10368)) + mono({4, 2}, r(1, 5760)) + mono({6}, r(1, 12096));
    if (!ok) detail = "displayed coefficients differ";
    const auto d = lambda_vector_direct(12);
    for (std::size_t n = 0; n < l.size(); ++n)
        if (!(l[n] == d[n])) {
            detail = "constructions differ at weight " + std::to_string(n);
            ok = false;
        }
    return ok;
}

bool modular(std::string& detail) {
    const auto rep = cli::modular_identities_report(20);
    if (!rep.pass()) detail = to_table(rep);
    return rep.pass();
}

bool degenerate_modulus(std::string& detail) {
    const int q = 8, eps = 8;
    const auto d = degenerate_tau(q, eps, eps);
    bool ok = agree(d.coeff(2), QSeries::constant(Var::q1, r(-1, 12), q)) &&
              agree(d.coeff(4), eisenstein(2, q, Var::q1).scaled(r(1, 144))) && d.coeff(4).trunc() >= q;
    for (int p = 0; p <= eps; p += (p == 0 ? 1 : 2))
        if (!d.coeff(p).is_zero()) ok = false;
    detail = eps_text(d.truncated(5));
    return ok;
}

bool heisenberg(std::string& detail) {
    const auto rep = verify_heisenberg_degeneration(8, 10, 8);
    const std::vector<std::string> needed{"eta(q1)/eta(q)", "det(I - A1 A2(0))^(-1/2)", "lim / Z_M^(1)(q)"};
    bool ok = rep.pass();
    for (const auto& name : needed)
        if (std::none_of(rep.checks.begin(), rep.checks.end(), [&](const Check& c) { return c.name == name; })) ok = false;
    if (!ok) detail = to_table(rep, true);
    return ok;
}

bool detHi(std::string& detail) {
    const auto rep = verify_detHi(8, 6, 4, 8);
    if (!rep.pass()) detail = to_table(rep, true);
    return rep.pass();
}

bool theta(std::string& detail) {
    bool ok = true;
    for (const auto& p : cli::acceptance_pairs()) {
        const auto rep = verify_theta_degeneration(p, 8, 6, 8, 8);
        if (!rep.pass()) {
            ok = false;
            detail += to_table(rep, true);
        }
    }
    return ok;
}

bool structure(std::string& detail) {
    const auto rep = cli::structure_report(10, 10);
    if (!rep.pass()) detail = to_table(rep);
    return rep.pass() && rep.checks.size() == 2 * 42;  // 42 PBW monomials of weight <= 10
}

// Serializes every series behind criteria 4-7 for a given matrix size.
std::string soundness_fingerprint(int extra) {
    std::string out;
    auto add = [&](const json& j) { out += j.dump() + "\n"; };
    add(to_json(degenerate_tau(8, 8, 8 + extra)));
    add(to_json(limit_q2(z2_heisenberg(10, 0, 8, 8 + extra), r(1, 24))));
    const auto logdet = log_det_degenerate(6, 8, 8 + extra);
    const auto delta = degenerate_tau(6, 8, 8 + extra);
    add(to_json(logdet));
    for (int l = 0; l <= 4; ++l) add(to_json(expected_H(l, logdet, delta)));
    for (const auto& p : cli::acceptance_pairs()) {
        add(to_json(limit_q2(z2_module_pair(p, 6, 0, 8, 8 + extra), Rational(p.rank, 24))));
        add(to_json(z2_module_pair_degenerate(p, 6, 8, 8 + extra)));
    }
    return out;
}

bool soundness(std::string& detail) {
    const std::string a = soundness_fingerprint(0), b = soundness_fingerprint(3);
    detail = std::to_string(a.size()) + " bytes compared";
    return a == b;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "beta table beta_2 .. beta_14", 1, beta_table},
        {2, "lambda^(2,4,6) and two constructions agree to weight 12", 10, lambda_vectors},
        {3, "qd E2 = 5E4 - E2^2 and qd eta = -1/2 E2 eta to q^20", 1, modular},
        {4, "2 pi i (tau - tau1) = -eps^2/12 + E2 eps^4/144 + O(eps^6)", 5, degenerate_modulus},
        {5, "Heisenberg degeneration ratio 1 + E4 eps^4/576 with intermediates", 30, heisenberg},
        {6, "H_l = det^(-C/2) delta^l/l!, l <= 4, eps^8, q^6", 300, detHi},
        {7, "lim Theta^(2) = Theta^(1)(q), three routes, four module pairs", 600, theta},
        {8, "C-degree bounds and quasi-modular weights, weight <= 10", 300, structure},
        {9, "criteria 4-7 unchanged with matrix size N+3", 600, soundness},
    };
    bool all = true;
    for (const auto& c : criteria) {
        std::string detail;
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = c.body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.budget_seconds;
        if (!in_time) detail += " (over time budget)";
        ok = ok && in_time;
        all = all && ok;
        std::printf("criterion %d: %s  %s  [%.3fs]\n", c.id, ok ? "PASS" : "FAIL", c.title.c_str(), secs);
        if (!ok && !detail.empty()) std::printf("%s\n", detail.c_str());
    }
    std::printf("acceptance: %s\n", all ? "PASS" : "FAIL");
    return all ? 0 : 1;
}
