#ifndef RANDMEANS_QUADRATURE_HPP
#define RANDMEANS_QUADRATURE_HPP

#include <vector>

namespace randmeans {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule with n points on (0, 1).  Nodes are the roots of
// the degree-n Legendre polynomial (Newton iteration on the recurrence),
// mapped affinely from (-1, 1); exact for polynomials of degree 2n - 1.
QuadratureRule gauss_legendre_01(int n);

} // namespace randmeans

#endif
