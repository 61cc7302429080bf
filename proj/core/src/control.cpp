#include "qsc/control.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "qsc/expr.hpp"

namespace qsc {

namespace {

double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

GridFunction map3(const GridFunction& a, const GridFunction& b, const GridFunction& c,
                  const std::function<cplx(double, cplx, cplx, cplx)>& fn) {
    if (!(a.grid() == b.grid()) || !(a.grid() == c.grid()))
        throw std::invalid_argument("grid mismatch between triple components");
    const std::size_t lo = std::max({a.lo_valid(), b.lo_valid(), c.lo_valid()});
    const std::size_t hi = std::min({a.hi_valid(), b.hi_valid(), c.hi_valid()});
    if (lo > hi) throw std::invalid_argument("triple components have no common valid window");
    std::vector<cplx> out(a.grid().total(), cplx{std::numeric_limits<double>::quiet_NaN(), 0.0});
    for (std::size_t i = lo; i <= hi; ++i)
        out[i] = fn(a.grid().t(i), a.raw()[i], b.raw()[i], c.raw()[i]);
    return GridFunction(a.grid(), std::move(out), lo, hi);
}

}  // namespace

ControlSystem control_from_lagrangian(const Lagrangian& L) {
    ControlSystem sys;
    sys.L = L;
    sys.name = "phi=u over " + L.name;
    sys.phi = [](double, cplx, cplx u) { return u; };
    sys.phi_d1 = [](double, cplx, cplx) { return cplx{0.0, 0.0}; };
    sys.phi_d2 = [](double, cplx, cplx) { return cplx{0.0, 0.0}; };
    sys.phi_d3 = [](double, cplx, cplx) { return cplx{1.0, 0.0}; };
    return sys;
}

ControlSystem control_system(Lagrangian L, const std::string& phi_expr) {
    const Expr e = Expr::parse(phi_expr);
    const Expr e1 = e.diff("t"), e2 = e.diff("q"), e3 = e.diff("u");
    ControlSystem sys;
    sys.L = std::move(L);
    sys.name = "phi=" + phi_expr;
    sys.phi = [e](double t, cplx q, cplx u) { return e.eval({{"t", t}, {"q", q}, {"u", u}}); };
    sys.phi_d1 = [e1](double t, cplx q, cplx u) { return e1.eval({{"t", t}, {"q", q}, {"u", u}}); };
    sys.phi_d2 = [e2](double t, cplx q, cplx u) { return e2.eval({{"t", t}, {"q", q}, {"u", u}}); };
    sys.phi_d3 = [e3](double t, cplx q, cplx u) { return e3.eval({{"t", t}, {"q", q}, {"u", u}}); };
    validate_phi_partials(sys);
    return sys;
}

void validate_phi_partials(const ControlSystem& sys, unsigned probes, double rel_tol,
                           unsigned long long seed) {
    std::mt19937_64 rng(seed);
    const double delta = 1e-5;
    const auto box = [&](double lo, double hi) { return lo + (hi - lo) * unit_double(rng); };
    for (unsigned p = 0; p < probes; ++p) {
        const double t = box(-1.0, 2.0);
        const cplx q{box(-2.0, 2.0), 0.0};
        const cplx u{box(-2.0, 2.0), box(-1.0, 1.0)};
        const cplx fd1 = (sys.phi(t + delta, q, u) - sys.phi(t - delta, q, u)) / (2.0 * delta);
        const cplx fd2 = (sys.phi(t, q + delta, u) - sys.phi(t, q - delta, u)) / (2.0 * delta);
        const cplx fd3 = (sys.phi(t, q, u + delta) - sys.phi(t, q, u - delta)) / (2.0 * delta);
        const auto bad = [&](cplx fd, cplx an) {
            return std::abs(fd - an) > rel_tol * std::max(1.0, std::abs(fd));
        };
        if (bad(fd1, sys.phi_d1(t, q, u)) || bad(fd2, sys.phi_d2(t, q, u)) ||
            bad(fd3, sys.phi_d3(t, q, u)))
            throw std::invalid_argument("ControlSystem '" + sys.name +
                                        "': phi partials disagree with finite differences");
    }
}

Hamiltonian hamiltonian(const ControlSystem& sys) {
    Hamiltonian H;
    const Lagrangian L = sys.L;
    const auto phi = sys.phi;
    const auto phi_d2 = sys.phi_d2, phi_d3 = sys.phi_d3;
    H.eval = [L, phi](double t, cplx q, cplx u, cplx p) {
        return L.eval(t, q, u) + p * phi(t, q, u);
    };
    H.d2 = [L, phi_d2](double t, cplx q, cplx u, cplx p) {
        return L.d2(t, q, u) + p * phi_d2(t, q, u);
    };
    H.d3 = [L, phi_d3](double t, cplx q, cplx u, cplx p) {
        return L.d3(t, q, u) + p * phi_d3(t, q, u);
    };
    H.d4 = [phi](double t, cplx q, cplx u, cplx) { return phi(t, q, u); };
    return H;
}

PontryaginTriple::PontryaginTriple(GridFunction q_, GridFunction u_, GridFunction p_)
    : q(std::move(q_)), u(std::move(u_)), p(std::move(p_)) {
    if (!(q.grid() == u.grid()) || !(q.grid() == p.grid()))
        throw std::invalid_argument("PontryaginTriple: components must share one grid");
    double scale = 1.0;
    for (std::size_t i = q.lo_valid(); i <= q.hi_valid(); ++i)
        scale = std::max(scale, std::abs(q.raw()[i]));
    for (std::size_t i = q.lo_valid(); i <= q.hi_valid(); ++i)
        if (std::abs(q.raw()[i].imag()) > 1e-12 * scale)
            throw std::invalid_argument("PontryaginTriple: state path must be real-valued");
}

PontryaginResiduals pontryagin_residuals(const ControlSystem& sys, const PontryaginTriple& triple,
                                         ScaleParams eps) {
    if (static_cast<long>(triple.q.grid().n_pad) < eps.k)
        throw std::invalid_argument("insufficient padding for the scale derivative");
    const Hamiltonian H = hamiltonian(sys);
    const GridFunction dq = scale_derivative(triple.q, eps);
    const GridFunction dp = scale_derivative(triple.p, eps);

    PontryaginResiduals out{
        lincomb(1.0, dq, -1.0, map3(triple.q, triple.u, triple.p, H.d4)).restricted_to_core(),
        lincomb(1.0, dp, 1.0, map3(triple.q, triple.u, triple.p, H.d2)).restricted_to_core(),
        map3(triple.q, triple.u, triple.p, H.d3).restricted_to_core()};
    return out;
}

ReductionReport reduction_check(const Lagrangian& L, const GridFunction& q, ScaleParams eps) {
    // phi = u, u := Dq, p := -d3 L(t, q, Dq)
    const ControlSystem sys = control_from_lagrangian(L);
    const GridFunction u = scale_derivative(q, eps);
    const GridFunction p = detail::map2(q, u, [&](double t, cplx qv, cplx uv) {
        return -L.d3(t, qv, uv);
    });
    const PontryaginTriple triple(q, u, p);
    const PontryaginResiduals res = pontryagin_residuals(sys, triple, eps);
    const GridFunction el = el_residual(L, q, eps);
    const GridFunction gap = lincomb(1.0, res.adjoint, -1.0, el);

    ReductionReport rep{p, gap.sup_core()};
    return rep;
}

ControlGenerator constant_control_generator(double tau, double xi, double rho, double sigma,
                                            std::string name) {
    ControlGenerator gen;
    gen.tau = [tau](double, double, cplx, cplx) { return tau; };
    gen.xi = [xi](double, double, cplx, cplx) { return xi; };
    gen.rho = [rho](double, double, cplx, cplx) { return rho; };
    gen.sigma = [sigma](double, double, cplx, cplx) { return sigma; };
    gen.beta = 1.0;
    gen.name = std::move(name);
    return gen;
}

ConstancyReport hamiltonian_noether_constant(const ControlSystem& sys,
                                             const PontryaginTriple& triple,
                                             const ControlGenerator& gen, ScaleParams eps) {
    const Hamiltonian H = hamiltonian(sys);
    const Grid& g = triple.q.grid();
    const std::size_t lo = std::max({triple.q.lo_valid(), triple.u.lo_valid(), triple.p.lo_valid()});
    const std::size_t hi = std::min({triple.q.hi_valid(), triple.u.hi_valid(), triple.p.hi_valid()});
    std::vector<cplx> out(g.total(), cplx{std::numeric_limits<double>::quiet_NaN(), 0.0});
    for (std::size_t i = lo; i <= hi; ++i) {
        const double t = g.t(i);
        const double qv = triple.q.raw()[i].real();
        const cplx uv = triple.u.raw()[i], pv = triple.p.raw()[i];
        const cplx h = H.eval(t, qv, uv, pv);
        out[i] = h * gen.tau(t, qv, uv, pv) - pv * gen.xi(t, qv, uv, pv);
    }
    const GridFunction series(g, std::move(out), lo, hi);

    ConstancyReport rep;
    rep.series = series.restricted_to_core();
    rep.reference = rep.series.value(rep.series.lo_valid());
    double drift = 0.0;
    for (std::size_t i = rep.series.lo_valid(); i <= rep.series.hi_valid(); ++i)
        drift = std::max(drift, std::abs(rep.series.raw()[i] - rep.reference));
    rep.max_drift = drift;

    try {
        const double tol = 10.0 * eps.epsilon(g) * sys.L.K;
        const PontryaginResiduals res = pontryagin_residuals(sys, triple, eps);
        rep.extremal_warning = res.state.sup_core() > tol || res.adjoint.sup_core() > tol ||
                               res.stationary.sup_core() > tol;
    } catch (const std::exception&) {
        rep.extremal_warning = false;
    }
    return rep;
}

}  // namespace qsc
