#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsc/analytic.hpp"
#include "qsc/fit.hpp"
#include "qsc/grid.hpp"
#include "qsc/scale_ops.hpp"

namespace qsc {

/// Closed-form Lagrangian L(t, q, v) with exact partials in each slot. The
/// velocity slot accepts complex arguments (it carries scale derivatives).
/// K is the declared sup-norm bound of DL along admissible data; residual and
/// drift tolerances default to 10 * eps * K.
struct Lagrangian {
    std::function<cplx(double, cplx, cplx)> eval;
    std::function<cplx(double, cplx, cplx)> d1, d2, d3;
    double K = 1.0;
    std::string name;
};

/// Cross-checks the declared partials against central finite differences of
/// eval at `probes` pseudo-random points (fixed seed); throws on mismatch.
void validate_partials(const Lagrangian& L, unsigned probes = 100, double rel_tol = 1e-6,
                       unsigned long long seed = 0x51CA1Eu);

/// 1/2 m v^2 + U(q); requires a potential with a closed-form derivative.
Lagrangian quadratic_lagrangian(double mass, const AnalyticFunction& potential);
/// Free particle 1/2 m v^2.
Lagrangian free_lagrangian(double mass = 1.0);
/// L from the expression grammar over variables t, q, v; partials by exact
/// differentiation of the tree, then finite-difference validated.
Lagrangian lagrangian_from_expr(const std::string& source, double K = 1.0);

/// Infinitesimal transformation (tau, xi) with its declared Hölder class.
struct Generator {
    std::function<double(double, double)> tau, xi;  // (t, q) -> real
    double beta = 1.0;
    std::string name;
    /// Monomial coefficients (degree-lex in t, q) when the generator is
    /// polynomial, e.g. produced by symmetry_search; empty otherwise.
    std::vector<double> tau_coeffs, xi_coeffs;
};

Generator constant_generator(double tau, double xi, std::string name = "");

/// A candidate invariant evaluated along a trajectory.
struct ConstancyReport {
    GridFunction series;  // C(t) on the core interval
    cplx reference{};     // C at the first core node
    double max_drift = 0.0;
    std::optional<ConvergenceFit> eps_order;  // drift over an eps ladder
    bool extremal_warning = false;            // trajectory failed the residual pre-check
};

/// Euler-Lagrange residual d2 L - D[d3 L] on the core (padding must cover
/// 2 eps for the nested derivative).
GridFunction el_residual(const Lagrangian& L, const GridFunction& q, ScaleParams eps);

/// Energy-rate residual D{L - d3 L * Dq} - d1 L + correction(d3 L, Dq), with
/// the correction following the chosen product-rule convention.
GridFunction dbr_residual(const Lagrangian& L, const GridFunction& q, ScaleParams eps,
                          LeibnizVariant variant = LeibnizVariant::DerivedExact);

/// Integral of  d1 L tau + d2 L xi + d3 L (D xi_hat - Dq D tau_hat)  over each
/// subinterval, where tau_hat, xi_hat are the generator composed with the
/// trajectory before differentiation.
std::vector<cplx> invariance_residual(const Lagrangian& L, const GridFunction& q,
                                      const Generator& gen, ScaleParams eps,
                                      const std::vector<std::pair<double, double>>& subintervals);

/// Candidate constant of motion  C = d3 L * xi + (L - d3 L * Dq) * tau  along q.
ConstancyReport noether_constant(const Lagrangian& L, const GridFunction& q, const Generator& gen,
                                 ScaleParams eps);

/// Drift of the candidate constant over an eps ladder, order-fitted.
ConvergenceFit noether_drift_order(const Lagrangian& L, const GridFunction& q,
                                   const Generator& gen, const std::vector<ScaleParams>& ladder);

/// Classical limit quantities computed with the exact derivative of q (and
/// central differences for time derivatives of composite series); the eps -> 0
/// reference for every scale quantity.
struct ClassicalReport {
    GridFunction el;   // d2 L - d/dt d3 L
    GridFunction dbr;  // d1 L - d/dt {L - d3 L qdot}
    std::function<GridFunction(const Generator&)> noether_series;
    std::function<GridFunction(const Generator&)> noether_rate;  // dC/dt, central differences
};

ClassicalReport classical_oracle(const Lagrangian& L, const AnalyticFunction& q, const Grid& g);

/// Null-space search for polynomial generators annihilating the invariance
/// integrand across all probe trajectories.
struct SymmetrySearchResult {
    std::vector<std::pair<Generator, double>> generators;  // basis with residuals
    bool underdetermined = false;
    std::vector<double> singular_values;
    std::vector<std::string> basis_names;  // monomials spanning tau and xi
};

SymmetrySearchResult symmetry_search(const Lagrangian& L, const std::vector<GridFunction>& probes,
                                     int degree, ScaleParams eps, double null_tol_rel = 1e-8);

}  // namespace qsc
