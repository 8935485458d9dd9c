// Degenerates the rank-two module pair with alpha^2 = 1/4 and compares the
// three routes to the limit.

#include <g2sew/g2sew.hpp>

#include <iostream>

int main() {
    using namespace g2sew;
    const int eps = 6, q = 5;
    std::cout << "2 pi i (tau - tau1) = " << eps_text(degenerate_tau(q, eps, eps)) << "\n\n";
    const ModulePair pair{2, Rational(1, 4), 0, 0};
    const auto report = verify_theta_degeneration(pair, eps, q, eps, eps);
    std::cout << to_table(report, true);
    return report.pass() ? 0 : 1;
}
