#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qsc/analytic.hpp"
#include "qsc/control.hpp"
#include "test_util.hpp"

using namespace qsc;
using namespace qsc::test;

namespace {

Grid binary_grid(int log2_h, std::size_t pad) {
    const double h = std::pow(2.0, -log2_h);
    return Grid(0.0, h, static_cast<std::size_t>(1 << log2_h) + 1, pad);
}

Lagrangian oscillator() {
    return quadratic_lagrangian(1.0, AnalyticFunction::polynomial({0.0, 0.0, 0.5}));
}

/// Free-particle extremal triple q = 3t, u = 3, p = -3.
PontryaginTriple free_triple(const Grid& g) {
    return PontryaginTriple(sample(AnalyticFunction::polynomial({0.0, 3.0}), g),
                            constant_fn(g, {3.0, 0.0}), constant_fn(g, {-3.0, 0.0}));
}

}  // namespace

TEST_CASE("hamiltonian assembles L + p phi with its partials") {
    const ControlSystem sys = control_from_lagrangian(free_lagrangian());
    const Hamiltonian H = hamiltonian(sys);
    // H = u^2/2 + p u
    CHECK(std::abs(H.eval(0.0, 1.0, cplx{2.0, 0.0}, cplx{3.0, 0.0}) - cplx{8.0, 0.0}) < 1e-14);

    const ControlSystem osc = control_from_lagrangian(oscillator());
    const Hamiltonian Hosc = hamiltonian(osc);
    const cplx q{0.7, 0.0}, u{1.3, 0.2}, p{-0.4, 0.0};
    CHECK(std::abs(Hosc.d2(0.0, q, u, p) - q) < 1e-14);            // d2 H = q
    CHECK(std::abs(Hosc.d3(0.0, q, u, p) - (u + p)) < 1e-14);      // d3 H = u + p
    CHECK(std::abs(Hosc.d4(0.0, q, u, p) - u) < 1e-14);            // d4 H = phi = u

    const ControlSystem zero = control_system(lagrangian_from_expr("0*v"), "0*u");
    const Hamiltonian Hz = hamiltonian(zero);
    CHECK(std::abs(Hz.eval(0.3, q, u, p)) < 1e-14);
}

TEST_CASE("phi partial validation rejects wrong derivatives") {
    ControlSystem sys = control_from_lagrangian(free_lagrangian());
    sys.phi_d3 = [](double, cplx, cplx) { return cplx{2.0, 0.0}; };  // should be 1
    CHECK_THROWS_AS(validate_phi_partials(sys), std::invalid_argument);
}

TEST_CASE("triple components must share a grid and a real state") {
    Grid g = binary_grid(6, 8);
    Grid other(0.0, 0.5, 8, 2);
    const GridFunction q = sample(AnalyticFunction::polynomial({0.0, 1.0}), g);
    CHECK_THROWS_AS(PontryaginTriple(q, constant_fn(other, {1.0, 0.0}), constant_fn(g, {0.0, 0.0})),
                    std::invalid_argument);
    CHECK_THROWS_AS(PontryaginTriple(constant_fn(g, {0.0, 1.0}), q, q), std::invalid_argument);
}

TEST_CASE("free-particle triple satisfies every residual") {
    Grid g = binary_grid(8, 16);
    const ControlSystem sys = control_from_lagrangian(free_lagrangian());
    const PontryaginResiduals res = pontryagin_residuals(sys, free_triple(g), ScaleParams(4));
    CHECK(res.state.sup_core() <= 1e-12);
    CHECK(res.adjoint.sup_core() <= 1e-12);
    CHECK(res.stationary.sup_core() <= 1e-12);
}

TEST_CASE("all-zero triple is trivially extremal for the free system") {
    Grid g = binary_grid(6, 8);
    const ControlSystem sys = control_from_lagrangian(free_lagrangian());
    const PontryaginTriple triple(constant_fn(g, {0.0, 0.0}), constant_fn(g, {0.0, 0.0}),
                                  constant_fn(g, {0.0, 0.0}));
    const PontryaginResiduals res = pontryagin_residuals(sys, triple, ScaleParams(2));
    CHECK(res.state.sup_core() == 0.0);
    CHECK(res.adjoint.sup_core() == 0.0);
    CHECK(res.stationary.sup_core() == 0.0);
}

TEST_CASE("dropping the co-vector breaks stationarity") {
    Grid g = binary_grid(8, 16);
    const ControlSystem sys = control_from_lagrangian(free_lagrangian());
    const PontryaginTriple triple(sample(AnalyticFunction::polynomial({0.0, 3.0}), g),
                                  constant_fn(g, {3.0, 0.0}), constant_fn(g, {0.0, 0.0}));
    const PontryaginResiduals res = pontryagin_residuals(sys, triple, ScaleParams(4));
    CHECK(res.stationary.sup_core() == doctest::Approx(3.0));
}

TEST_CASE("state residual is exactly the control-system defect") {
    Grid g = binary_grid(8, 16);
    const ControlSystem sys = control_from_lagrangian(free_lagrangian());
    const PontryaginTriple triple(sample(AnalyticFunction::trig(0.5, 2.0, 0.1), g),
                                  sample(AnalyticFunction::gaussian(0.5, 0.4), g),
                                  constant_fn(g, {0.25, 0.0}));
    const ScaleParams eps(2);
    const PontryaginResiduals res = pontryagin_residuals(sys, triple, eps);
    const GridFunction defect = lincomb(1.0, scale_derivative(triple.q, eps), -1.0, triple.u);
    CHECK(max_abs_diff(res.state, defect) == 0.0);
}

TEST_CASE("reduction glues the adjoint residual to the variational one") {
    Grid g = binary_grid(10, 64);
    struct Case {
        Lagrangian L;
        GridFunction q;
    };
    const std::vector<Case> problems = {
        {free_lagrangian(), sample(AnalyticFunction::polynomial({0.0, 1.0}), g)},
        {oscillator(), sample(AnalyticFunction::exponential(0.5, 0.5, 1.0), g)},
        {lagrangian_from_expr("t*v"), sample(AnalyticFunction::polynomial({1.0, 0.0, 1.0}), g)},
    };
    for (const auto& c : problems) {
        const ReductionReport rep = reduction_check(c.L, c.q, ScaleParams(4));
        CHECK(rep.el_equiv_gap <= 1e-12);
    }
}

TEST_CASE("hamiltonian constants of the free-particle triple are exact") {
    Grid g = binary_grid(8, 16);
    const ControlSystem sys = control_from_lagrangian(free_lagrangian());
    const PontryaginTriple triple = free_triple(g);

    const ConstancyReport time_shift = hamiltonian_noether_constant(
        sys, triple, constant_control_generator(1.0, 0.0), ScaleParams(4));
    CHECK(std::abs(time_shift.reference - cplx{-4.5, 0.0}) <= 1e-12);
    CHECK(time_shift.max_drift <= 1e-12);

    const ConstancyReport translation = hamiltonian_noether_constant(
        sys, triple, constant_control_generator(0.0, 1.0), ScaleParams(4));
    CHECK(std::abs(translation.reference - cplx{3.0, 0.0}) <= 1e-12);
    CHECK(translation.max_drift <= 1e-12);

    const PontryaginTriple zeros(constant_fn(g, {0.0, 0.0}), constant_fn(g, {0.0, 0.0}),
                                 constant_fn(g, {0.0, 0.0}));
    const ConstancyReport trivial = hamiltonian_noether_constant(
        sys, zeros, constant_control_generator(0.7, -0.3), ScaleParams(2));
    CHECK(std::abs(trivial.reference) == 0.0);
    CHECK(trivial.max_drift == 0.0);
}

TEST_CASE("reduction identity: hamiltonian constant equals the lagrangian one") {
    Grid g = binary_grid(10, 32);
    const Lagrangian L = oscillator();
    const GridFunction q = sample(AnalyticFunction::exponential(0.5, 0.5, 1.0), g);
    const ScaleParams eps(4);

    const GridFunction u = scale_derivative(q, eps);
    const GridFunction p =
        detail::map2(q, u, [&](double t, cplx qv, cplx uv) { return -L.d3(t, qv, uv); });
    const PontryaginTriple triple(q, u, p);
    const ControlSystem sys = control_from_lagrangian(L);

    for (auto [tau, xi] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}, std::pair{0.6, -1.2}}) {
        const ConstancyReport ham = hamiltonian_noether_constant(
            sys, triple, constant_control_generator(tau, xi), eps);
        const ConstancyReport lag =
            noether_constant(L, q, constant_generator(tau, xi), eps);
        CHECK(max_abs_diff(ham.series, lag.series) <= 1e-12);
    }
}

TEST_CASE("hamiltonian constant is linear in the generator") {
    Grid g = binary_grid(8, 16);
    const ControlSystem sys = control_from_lagrangian(free_lagrangian());
    const PontryaginTriple triple = free_triple(g);
    const ScaleParams eps(2);
    const auto c1 = hamiltonian_noether_constant(sys, triple,
                                                 constant_control_generator(1.0, 0.0), eps);
    const auto c2 = hamiltonian_noether_constant(sys, triple,
                                                 constant_control_generator(0.0, 1.0), eps);
    const auto mix = hamiltonian_noether_constant(
        sys, triple, constant_control_generator(2.5, -0.75), eps);
    const GridFunction expect = lincomb(2.5, c1.series, -0.75, c2.series);
    CHECK(max_abs_diff(mix.series, expect) <= 1e-12);
}
