#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsc/analytic.hpp"
#include "qsc/grid.hpp"
#include "qsc/scale_ops.hpp"
#include "qsc/variational.hpp"

namespace qsc {

enum class FlowVariant { Nonlinear, Linear };

/// Physical data of the two flow problems: mass, the nonlinear coupling
/// gamma, hbar for the linear variant, the potential U (with derivative) and
/// the free continuous term alpha(q) of the nonlinear equation.
struct SchrodingerParams {
    double m = 1.0;
    double gamma = 0.5;
    double hbar = 1.0;
    AnalyticFunction U = AnalyticFunction::polynomial({0.0});
    std::optional<AnalyticFunction> alpha_fn;
};

/// 2-D tabulated field on a tensor (t, q) grid, row-major in t.
struct Tabulated2D {
    double t0 = 0.0, dt = 1.0;
    double q0 = 0.0, dq = 1.0;
    std::size_t nt = 0, nq = 0;
    std::vector<cplx> values;

    cplx at(std::size_t it, std::size_t iq) const { return values[it * nq + iq]; }
};

/// Closed-form (or tabulated) wave function with the partials the residual
/// checkers need. Tabulated fields use central differences at the grid step,
/// so their probes must stay one node away from the table border.
class WaveFunction {
public:
    /// e^{i (k q - E t / hbar)}
    static WaveFunction plane_wave(double k, double E, double hbar = 1.0);
    /// H_n(sqrt(m w / hbar) q) e^{-m w q^2 / (2 hbar)} e^{-i E_n t / hbar},
    /// E_n = (n + 1/2) hbar w
    static WaveFunction harmonic_eigenstate(int n_level, double m, double omega, double hbar);
    static WaveFunction tabulated(Tabulated2D field);

    cplx value(double t, double q) const;
    cplx dt(double t, double q) const;
    cplx dq(double t, double q) const;
    cplx dqq(double t, double q) const;
    /// dq / value; throws where the wave function vanishes.
    cplx dlog_dq(double t, double q) const;

    std::string kind_name() const;
    const std::vector<double>& params() const { return par_; }

    /// hbar the eigenstate/plane-wave factories were built with (time factor).
    double hbar_used() const { return hbar_; }

private:
    enum class Kind { PlaneWave, Harmonic, Tabulated };
    WaveFunction(Kind k, std::vector<double> par, double hbar,
                 std::optional<Tabulated2D> tab = std::nullopt)
        : kind_(k), par_(std::move(par)), hbar_(hbar), tab_(std::move(tab)) {}

    Kind kind_;
    std::vector<double> par_;
    double hbar_ = 1.0;
    std::optional<Tabulated2D> tab_;
};

/// Complex flow velocity identifying solutions with scale extremals:
/// -2 i gamma dln(Psi)/dq (nonlinear) or -i (hbar/m) dln(Psi)/dq (linear).
cplx flow_velocity(const WaveFunction& psi, const SchrodingerParams& par, FlowVariant variant,
                   double t, double q);

/// Path coefficient 1/2 [((D+q)^2 - (D-q)^2) - i ((D+q)^2 + (D-q)^2)];
/// identical to a_coeff(q, eps, 2).
GridFunction a_eps(const GridFunction& q, ScaleParams eps);

/// Tensor probe grid for the 2-D residual fields.
struct ProbeGrid2D {
    double t0 = 0.0, dt = 0.1;
    std::size_t nt = 1;
    double q0 = 0.0, dq = 0.1;
    std::size_t nq = 1;
};

struct ResidualField2D {
    std::vector<double> t, q;     // flattened row-major probes
    std::vector<cplx> residual;
    double sup = 0.0;
};

/// Defect of  2 i gamma m [ -(1/Psi)(dPsi/dq)^2 (i gamma + a/2) + dPsi/dt
///                          + (a/2) d2Psi/dq2 ] - (U + alpha) Psi
/// with the path coefficient supplied as a constant.
ResidualField2D nonlinear_pde_residual(const WaveFunction& psi, const SchrodingerParams& par,
                                       const ProbeGrid2D& probe, cplx a_value);
/// Same, with the coefficient series derived from a path (one value per
/// t-row; the series grid must carry the probe's t-axis nodes).
ResidualField2D nonlinear_pde_residual(const WaveFunction& psi, const SchrodingerParams& par,
                                       const ProbeGrid2D& probe, const GridFunction& a_series);

/// Defect of  i hbar dPsi/dt + (hbar^2 / 2m) d2Psi/dq2 - U Psi.
ResidualField2D linear_pde_residual(const WaveFunction& psi, const SchrodingerParams& par,
                                    const ProbeGrid2D& probe);

/// Candidate invariant of the nonlinear flow along a path:
///   C(t) = -2 m (gamma dln(Psi)/dq)^2 + U(q(t)).
ConstancyReport nonlinear_constant_of_motion(const WaveFunction& psi, const SchrodingerParams& par,
                                             const GridFunction& path);

/// Candidate invariant of the linear flow along a path:
///   C(t) = -(1/2m) (hbar dln(Psi)/dq)^2 + U(q(t)).
ConstancyReport linear_constant_of_motion(const WaveFunction& psi, const SchrodingerParams& par,
                                          const GridFunction& path);

/// The linear variant's admissibility condition on a path: a_eps must sit at
/// -i hbar / m. For the uniform flow path q = (hbar k / m) t this holds
/// exactly when (hbar k / m)^2 = hbar / m; the report carries both sides.
struct SideConditionReport {
    cplx required;      // -i hbar / m
    double max_dev = 0.0;  // sup |a_eps(path) - required| over the core
    bool holds = false;    // max_dev within tolerance
    double tolerance = 0.0;
};

SideConditionReport linear_side_condition_check(const GridFunction& path,
                                                const SchrodingerParams& par, ScaleParams eps,
                                                double tol_rel = 1e-9);

}  // namespace qsc
