// Prints the beta_k of the factored exponential map and the first lambda^(n).

#include <g2sew/g2sew.hpp>

#include <iostream>

int main() {
    using namespace g2sew;
    const auto beta = beta_coefficients(14);
    for (int k = 2; k <= 14; k += 2) std::cout << "beta_" << k << " = " << to_string(beta[static_cast<std::size_t>(k) - 1]) << "\n";
    const auto lambda = lambda_vector(6);
    for (int n = 0; n <= 6; n += 2) std::cout << "lambda^(" << n << ") = " << to_text(lambda[static_cast<std::size_t>(n)]) << "\n";
}
