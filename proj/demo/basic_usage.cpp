// Galois dimension of X(θ) ⊕ X(θ³+θ²) over F_3, then the period and a logarithm over F_2.

#include <iostream>

#include "tmg/galois.hpp"

int main() {
  using namespace tmg;
  const auto F3 = Field::make(3);
  const RatTheta theta = RatTheta::theta(F3);
  const GaloisReport rep = galois_dimension({theta, theta * theta * theta + theta * theta}, SolverBounds::uniform(2));
  std::cout << "q = 3: relation rank " << rep.relation_rank << ", dim G = " << rep.dim_G << ", "
            << to_string(rep.status) << "\n";

  const auto F2 = Field::make(2);
  std::cout << "pi = " << pi_product(F2, 12, 4).to_string() << "\n";
  std::cout << "log_C(1) = " << log_value(RatTheta::constant(F2, F2->one()), 4, 12).to_string() << "\n";
  return rep.dim_G == 2 ? 0 : 1;
}
