#pragma once

namespace plap {

/// phi(t) = t |t|^{p-2}, the flux nonlinearity of the p-Laplacian.
double phi(double t, double p);

/// (p-1)|t|^{p-2}. Throws SolverError(Pole) for t == 0 with p < 2.
double phiDerivative(double t, double p);

/// sign(s)|s|^{1/(p-1)}; inverse of phi for every p > 1.
double phiInverse(double s, double p);

}  // namespace plap
