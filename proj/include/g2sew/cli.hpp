#pragma once

// Command-line front end.  run() returns the process exit status:
// 0 success, 1 verification failure, 2 usage error.

#include <g2sew/genus2.hpp>

#include <CLI11.hpp>

#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace g2sew::cli {

enum class Format { table, json };

struct RunConfig {
    int eps_trunc{8};
    int q_trunc{8};
    int max_weight{8};
    int matrix_size{-1};  // -1: follow eps_trunc
    Format format{Format::table};

    int n() const { return matrix_size < 0 ? std::max(eps_trunc, 1) : matrix_size; }
};

class usage_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline Partition parse_partition(const std::string& text) {
    std::vector<int> parts;
    if (!text.empty() && text != "vacuum") {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            std::size_t used = 0;
            int k = 0;
            try {
                k = std::stoi(item, &used);
            } catch (const std::exception&) {
                throw usage_error("malformed partition: " + text);
            }
            if (used != item.size()) throw usage_error("malformed partition: " + text);
            parts.push_back(k);
        }
    }
    try {
        return Partition(parts);
    } catch (const std::invalid_argument& e) {
        throw usage_error(e.what());
    }
}

inline Rational parse_flag_rational(const std::string& text, const char* flag) {
    try {
        return parse_rational(text);
    } catch (const std::exception&) {
        throw usage_error(std::string("malformed rational for ") + flag + ": " + text);
    }
}

/// Everything a subcommand produces: rendered text and, for verification, a verdict.
struct Output {
    std::string text;
    bool pass{true};
};

namespace detail {

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline Output render_reports(const std::vector<DegenerationReport>& reports, Format f) {
    Output out;
    for (const auto& r : reports) out.pass = out.pass && r.pass();
    if (f == Format::json) {
        json arr = json::array();
        for (const auto& r : reports) arr.push_back(to_json(r));
        out.text = dump(json{{"pass", out.pass}, {"reports", std::move(arr)}});
    } else {
        for (const auto& r : reports) out.text += to_table(r);
        out.text += std::string("overall: ") + (out.pass ? "PASS" : "FAIL") + "\n";
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Commands.

inline Output cmd_beta(int max_k, Format f) {
    if (max_k < 2 || max_k % 2 != 0) throw usage_error("--max must be even and >= 2");
    const auto beta = beta_coefficients(max_k);
    Output out;
    if (f == Format::json) {
        json rows = json::array();
        for (int k = 2; k <= max_k; k += 2) rows.push_back({{"k", k}, {"beta", to_string(beta[static_cast<std::size_t>(k) - 1])}});
        out.text = detail::dump(rows);
    } else {
        out.text = "k   beta_k\n";
        for (int k = 2; k <= max_k; k += 2) {
            std::string ks = std::to_string(k);
            out.text += ks + std::string(4 - std::min<std::size_t>(ks.size(), 3), ' ') + to_string(beta[static_cast<std::size_t>(k) - 1]) + "\n";
        }
    }
    return out;
}

inline Output cmd_lambda(int max_weight, Format f) {
    if (max_weight < 0 || max_weight % 2 != 0) throw usage_error("--max-weight must be even and >= 0");
    const auto lambda = lambda_vector(max_weight);
    const auto direct = lambda_vector_direct(max_weight);
    const bool agree_all = lambda == direct;
    Output out;
    out.pass = agree_all;
    if (f == Format::json) {
        json rows = json::array();
        for (int n = 0; n <= max_weight; n += 2)
            rows.push_back({{"weight", n}, {"state", to_json(lambda[static_cast<std::size_t>(n)])}});
        out.text = detail::dump(json{{"lambda", std::move(rows)}, {"constructions_agree", agree_all}});
    } else {
        for (int n = 0; n <= max_weight; n += 2)
            out.text += "lambda^(" + std::to_string(n) + ") = " + to_text(lambda[static_cast<std::size_t>(n)]) + "\n";
        out.text += std::string("factored and exponential constructions agree: ") + (agree_all ? "yes" : "NO") + "\n";
    }
    return out;
}

struct ComputeArgs {
    int k{2};
    std::string partition{"2,2"};
    std::string basis{"Z"};
    std::string alpha_sq{"0"};
    std::string beta_sq{"0"};
    std::string alpha_dot_beta{"0"};
    int rank{1};
};

inline ModulePair module_pair(const ComputeArgs& a) {
    if (a.rank < 1) throw usage_error("--rank must be positive");
    return ModulePair{a.rank, parse_flag_rational(a.alpha_sq, "--alpha-sq"), parse_flag_rational(a.beta_sq, "--beta-sq"),
                      parse_flag_rational(a.alpha_dot_beta, "--alpha-dot-beta")};
}

inline Output cmd_compute(const std::string& object, const RunConfig& cfg, const ComputeArgs& a) {
    const bool js = cfg.format == Format::json;
    Output out;
    auto series_out = [&](const auto& s, const std::string& text) {
        out.text = js ? detail::dump(to_json(s)) : text + "\n";
    };
    if (object == "eisenstein") {
        if (a.k < 2) throw usage_error("--k must be >= 2");
        const QSeries e = eisenstein(a.k, cfg.q_trunc);
        series_out(e, e.is_zero() ? std::string("0") : to_text(e));
    } else if (object == "eta") {
        const QSeries e = eta_normalized(cfg.q_trunc);
        series_out(e, to_text(e));
    } else if (object == "tau-degen") {
        const auto d = degenerate_tau(cfg.q_trunc, cfg.eps_trunc, cfg.n());
        series_out(d, eps_text(d));
    } else if (object == "period") {
        const auto pd = period_matrix(cfg.q_trunc, cfg.q_trunc, cfg.eps_trunc, cfg.n());
        if (js)
            out.text = detail::dump(json{{"d11", to_json(pd.d11)}, {"d22", to_json(pd.d22)}, {"d12", to_json(pd.d12)}});
        else
            out.text = "2 pi i (Omega11 - tau1) = " + to_text(pd.d11) + "\n2 pi i (Omega22 - tau2) = " + to_text(pd.d22) +
                       "\n2 pi i Omega12 = " + to_text(pd.d12) + "\n";
    } else if (object == "z2-heisenberg") {
        const auto z = z2_heisenberg(cfg.q_trunc, cfg.q_trunc, cfg.eps_trunc, cfg.n());
        series_out(z, to_text(z));
    } else if (object == "z2-module") {
        const auto z = z2_module_pair(module_pair(a), cfg.q_trunc, cfg.q_trunc, cfg.eps_trunc, cfg.n());
        series_out(z, to_text(z));
    } else if (object == "onepoint") {
        const Partition p = parse_partition(a.partition);
        if (a.basis != "Z" && a.basis != "Theta") throw usage_error("--basis must be Z or Theta");
        OnePointEngine engine(cfg.q_trunc);
        DiffOp op = engine.one_point(p);
        if (a.basis == "Theta") op = to_theta_basis(op);
        out.text = js ? detail::dump(to_json(op)) : to_text(op, p.weight()) + "\n";
    } else {
        throw usage_error("unknown object: " + object);
    }
    return out;
}

inline DegenerationReport modular_identities_report(int q_trunc) {
    DegenerationReport r;
    r.title = "modular identities";
    const QSeries e2 = eisenstein(2, q_trunc), e4 = eisenstein(4, q_trunc), eta = eta_normalized(q_trunc);
    const QSeries lhs1 = qd(e2), rhs1 = (e4.scaled(Rational(5)) - e2 * e2).truncated(q_trunc);
    const std::string order = "q^" + std::to_string(q_trunc);
    r.checks.push_back({"qd E2 = 5 E4 - E2^2", lhs1 == rhs1, order, to_text(rhs1), to_text(lhs1)});
    const QSeries lhs2 = qd(eta), rhs2 = (e2 * eta).scaled(Rational(-1, 2)).truncated(q_trunc);
    r.checks.push_back({"qd eta = -1/2 E2 eta", lhs2 == rhs2, order, to_text(rhs2), to_text(lhs2)});
    return r;
}

inline DegenerationReport structure_report(int max_weight, int q_trunc) {
    DegenerationReport r;
    r.title = "one-point structure: C-degree bounds and quasi-modular weights";
    r.notes.push_back("Z basis bound floor((m-i)/2), Theta basis bound m-i, coefficient weight n-2i");
    OnePointEngine engine(q_trunc);
    for (int n = 0; n <= max_weight; ++n)
        for (const auto& p : Partition::all_of_weight(n)) {
            const DiffOp z = engine.one_point(p);
            for (const DiffOp& op : {z, to_theta_basis(z)}) {
                const StructureReport s = structure_check(p, op);
                std::string detail;
                for (const auto& e : s.entries)
                    if (!e.degree_ok || !e.weight_ok)
                        detail += "(" + std::to_string(e.order) + "," + std::to_string(e.c_degree) + "): " + e.witness + "; ";
                r.checks.push_back({p.to_string() + " [" + basis_name(op.basis()) + "]", s.pass,
                                    "weight " + std::to_string(n) + ", q^" + std::to_string(q_trunc), "bounds hold",
                                    s.pass ? std::string("bounds hold") : detail});
            }
        }
    return r;
}

inline std::vector<ModulePair> acceptance_pairs() {
    return {ModulePair{1, 0, 0, 0}, ModulePair{1, 1, 0, 0}, ModulePair{2, Rational(1, 4), 0, 0}, ModulePair{1, 2, 0, 0}};
}

inline Output cmd_verify(const std::string& suite, const RunConfig& cfg, const ComputeArgs& a, bool pair_given) {
    std::vector<DegenerationReport> reports;
    const int n = cfg.n();
    auto detHi = [&] { reports.push_back(verify_detHi(cfg.eps_trunc, cfg.q_trunc, cfg.eps_trunc / 2, n)); };
    auto heis = [&] { reports.push_back(verify_heisenberg_degeneration(cfg.eps_trunc, cfg.q_trunc, n)); };
    auto theta = [&](const ModulePair& p) {
        if (!p.beta_zero()) throw usage_error("theta-degen requires beta = 0");
        if (cfg.max_weight < cfg.eps_trunc) throw usage_error("--max-weight must be >= --eps-order");
        reports.push_back(verify_theta_degeneration(p, cfg.eps_trunc, cfg.q_trunc, cfg.max_weight, n));
    };
    auto thetas = [&] {
        if (pair_given)
            theta(module_pair(a));
        else
            for (const auto& p : acceptance_pairs()) theta(p);
    };
    auto modular = [&] { reports.push_back(modular_identities_report(cfg.q_trunc)); };
    auto structure = [&] { reports.push_back(structure_report(cfg.max_weight, cfg.q_trunc)); };

    if (suite == "detHi")
        detHi();
    else if (suite == "heisenberg-degen")
        heis();
    else if (suite == "theta-degen")
        thetas();
    else if (suite == "modular-identities")
        modular();
    else if (suite == "structure")
        structure();
    else if (suite == "all") {
        modular();
        structure();
        detHi();
        heis();
        thetas();
    } else
        throw usage_error("unknown suite: " + suite);
    return detail::render_reports(reports, cfg.format);
}

// ---------------------------------------------------------------------------

/// Parses argv-style arguments (without the program name) and runs one command.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact genus-two sewing and torus degeneration toolkit", "g2sew"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string format = "table";
    app.add_option("--eps-order", cfg.eps_trunc, "eps truncation order")->check(CLI::NonNegativeNumber);
    app.add_option("--q-order", cfg.q_trunc, "q truncation order")->check(CLI::NonNegativeNumber);
    app.add_option("--max-weight", cfg.max_weight, "maximal state weight")->check(CLI::NonNegativeNumber);
    app.add_option("--matrix-size", cfg.matrix_size, "sewing matrix size N (default: eps order)")
        ->check(CLI::PositiveNumber);
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"table", "json"}));
    app.set_config("--config", "", "flat key=value file using the long flag names");

    ComputeArgs ca;
    int beta_max = 14;
    std::string object, suite;

    auto* beta = app.add_subcommand("beta", "print beta_2 .. beta_max")->fallthrough();
    beta->add_option("--max", beta_max, "largest index (even)");

    auto* lambda = app.add_subcommand("lambda", "print lambda^(n) for even n <= --max-weight")->fallthrough();

    auto add_pair_flags = [&](CLI::App* sub) {
        sub->add_option("--alpha-sq", ca.alpha_sq, "alpha.alpha as p/q");
        sub->add_option("--beta-sq", ca.beta_sq, "beta.beta as p/q");
        sub->add_option("--alpha-dot-beta", ca.alpha_dot_beta, "alpha.beta as p/q");
        sub->add_option("--rank", ca.rank, "Heisenberg rank r");
    };

    auto* compute = app.add_subcommand("compute", "print an exact object")->fallthrough();
    compute->add_option("object", object, "object")
        ->required()
        ->check(CLI::IsMember({"eisenstein", "eta", "tau-degen", "period", "z2-heisenberg", "z2-module", "onepoint"}));
    compute->add_option("--k", ca.k, "Eisenstein weight");
    compute->add_option("--partition", ca.partition, "parts k1,k2,... (each >= 2, weakly decreasing)");
    compute->add_option("--basis", ca.basis, "Z or Theta");
    add_pair_flags(compute);

    auto* verify = app.add_subcommand("verify", "run a verification suite")->fallthrough();
    verify->add_option("suite", suite, "suite")
        ->required()
        ->check(CLI::IsMember({"all", "detHi", "heisenberg-degen", "theta-degen", "modular-identities", "structure"}));
    add_pair_flags(verify);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, er;
        const int code = app.exit(e, o, er);
        out << o.str();
        err << er.str();
        return code == 0 ? 0 : 2;
    }
    cfg.format = format == "json" ? Format::json : Format::table;
    try {
        if (cfg.matrix_size >= 0 && cfg.matrix_size < cfg.eps_trunc)
            throw usage_error("--matrix-size must be >= --eps-order");
        Output result;
        if (*beta)
            result = cmd_beta(beta_max, cfg.format);
        else if (*lambda)
            result = cmd_lambda(cfg.max_weight, cfg.format);
        else if (*compute)
            result = cmd_compute(object, cfg, ca);
        else {
            const bool pair_given = verify->count("--alpha-sq") + verify->count("--rank") + verify->count("--beta-sq") +
                                        verify->count("--alpha-dot-beta") >
                                    0;
            result = cmd_verify(suite, cfg, ca, pair_given);
        }
        out << result.text;
        return result.pass ? 0 : 1;
    } catch (const usage_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const series_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace g2sew::cli
