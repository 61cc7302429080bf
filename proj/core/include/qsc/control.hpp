#pragma once

#include <functional>
#include <string>

#include "qsc/grid.hpp"
#include "qsc/scale_ops.hpp"
#include "qsc/variational.hpp"

namespace qsc {

/// Controlled dynamics Dq = phi(t, q, u) with running cost L(t, q, u); the
/// Lagrangian's third slot carries u. Partials are finite-difference
/// validated like the Lagrangian's.
struct ControlSystem {
    Lagrangian L;
    std::function<cplx(double, cplx, cplx)> phi, phi_d1, phi_d2, phi_d3;
    std::string name;
};

/// phi = u: the reduction of the control problem to the variational one.
ControlSystem control_from_lagrangian(const Lagrangian& L);
ControlSystem control_system(Lagrangian L, const std::string& phi_expr);
void validate_phi_partials(const ControlSystem& sys, unsigned probes = 100, double rel_tol = 1e-6,
                           unsigned long long seed = 0xC0117u);

/// H(t, q, u, p) = L(t, q, u) + p * phi(t, q, u), with its partials.
struct Hamiltonian {
    std::function<cplx(double, cplx, cplx, cplx)> eval;
    std::function<cplx(double, cplx, cplx, cplx)> d2, d3, d4;
};

Hamiltonian hamiltonian(const ControlSystem& sys);

/// Candidate extremal data: state, control and co-vector on a shared grid.
/// q is real-valued; u and p may be complex.
struct PontryaginTriple {
    GridFunction q, u, p;

    PontryaginTriple(GridFunction q, GridFunction u, GridFunction p);
};

/// Node-wise defects of the Hamiltonian system and stationary condition:
///   state = Dq - d4 H,  adjoint = Dp + d2 H,  stationary = d3 H.
struct PontryaginResiduals {
    GridFunction state, adjoint, stationary;
};

PontryaginResiduals pontryagin_residuals(const ControlSystem& sys, const PontryaginTriple& triple,
                                         ScaleParams eps);

/// With phi = u, u := Dq and p := -d3 L, the adjoint residual is the
/// Euler-Lagrange residual; reports the sup-gap between the two series.
struct ReductionReport {
    GridFunction p;
    double el_equiv_gap = 0.0;
};

ReductionReport reduction_check(const Lagrangian& L, const GridFunction& q, ScaleParams eps);

/// Infinitesimal transformation of (t, q, u, p); the u- and p-components are
/// carried for the augmented-problem route even though the candidate constant
/// reads only tau and xi.
struct ControlGenerator {
    std::function<double(double, double, cplx, cplx)> tau, xi, rho, sigma;
    double beta = 1.0;
    std::string name;
};

ControlGenerator constant_control_generator(double tau, double xi, double rho = 0.0,
                                            double sigma = 0.0, std::string name = "");

/// Candidate constant of motion  C = H(t,q,u,p) tau - p xi  along the triple.
ConstancyReport hamiltonian_noether_constant(const ControlSystem& sys,
                                             const PontryaginTriple& triple,
                                             const ControlGenerator& gen, ScaleParams eps);

}  // namespace qsc
