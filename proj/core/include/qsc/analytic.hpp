#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsc/grid.hpp"

namespace qsc {

/// Closed-form test catalog: smooth representatives of the C^{n+1} classes and
/// Weierstrass series as deterministic Hölder-class representatives. Real
/// functions embed as complex with zero imaginary part.
class AnalyticFunction {
public:
    enum class Kind { Polynomial, Trig, Exponential, Gaussian, Weierstrass, PlanePhase, Tabulated };

    /// c0 + c1 t + c2 t^2 + ...
    static AnalyticFunction polynomial(std::vector<double> coeffs);
    /// amp * sin(freq*t + phase)
    static AnalyticFunction trig(double amp, double freq, double phase);
    /// amp_plus * e^{rate t} + amp_minus * e^{-rate t}  (covers e^t, cosh, sinh)
    static AnalyticFunction exponential(double amp_plus, double amp_minus, double rate);
    /// exp(-(t-center)^2 / (2 width^2))
    static AnalyticFunction gaussian(double center, double width);
    /// sum_{j=0}^{n_terms-1} a^j cos(b^j pi t); 0 < a < 1, b odd integer >= 3
    static AnalyticFunction weierstrass(double a, int b, int n_terms);
    /// e^{i k u} along the sampled coordinate (the t=0 slice of the two-argument
    /// phase e^{i(k q - (E/hbar) t)}, see eval_tq)
    static AnalyticFunction plane_phase(double k, double e_over_hbar);
    static AnalyticFunction tabulated(GridFunction values);

    Kind kind() const { return kind_; }
    std::string kind_name() const;

    cplx eval(double t) const;
    bool has_derivative() const;
    cplx eval_derivative(double t) const;  // throws when has_derivative() is false

    /// Two-argument evaluation of the phase kind: e^{i(k q - (E/hbar) t)}.
    cplx eval_tq(double t, double q) const;

    /// Classical Hölder exponent ln(1/a)/ln(b) of the Weierstrass series.
    double weierstrass_alpha() const;
    /// Highest angular frequency b^{n_terms-1} * pi of the Weierstrass series.
    double weierstrass_max_frequency() const;

    const std::vector<double>& params() const { return par_; }
    const std::vector<double>& coefficients() const { return coeffs_; }
    const std::optional<GridFunction>& table() const { return tab_; }

private:
    AnalyticFunction(Kind k, std::vector<double> coeffs, std::vector<double> par,
                     std::optional<GridFunction> tab = std::nullopt)
        : kind_(k), coeffs_(std::move(coeffs)), par_(std::move(par)), tab_(std::move(tab)) {}

    Kind kind_;
    std::vector<double> coeffs_;  // polynomial coefficients
    std::vector<double> par_;     // kind-specific parameters
    std::optional<GridFunction> tab_;
};

/// Point-wise evaluation at every grid node (pads included). Non-finite
/// evaluations are rejected with the offending node index. For the
/// Weierstrass kind the truncation rule b^{n_terms-1} pi <= 1/(10h) is
/// enforced: higher frequencies are beyond the grid's resolving power.
GridFunction sample(const AnalyticFunction& f, const Grid& g);

/// Samples the closed-form derivative (see AnalyticFunction::eval_derivative).
GridFunction sample_derivative(const AnalyticFunction& f, const Grid& g);

}  // namespace qsc
