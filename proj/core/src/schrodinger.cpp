#include "qsc/schrodinger.hpp"

#include <cmath>
#include <stdexcept>

namespace qsc {

namespace {

constexpr cplx I{0.0, 1.0};

struct TableIndex {
    std::size_t it, iq;
};

/// Probes must sit on table nodes; nearest-node snapping would silently
/// evaluate somewhere else.
TableIndex table_index(const Tabulated2D& f, double t, double q) {
    const double xt = (t - f.t0) / f.dt, xq = (q - f.q0) / f.dq;
    const long long it = std::llround(xt), iq = std::llround(xq);
    if (it < 0 || iq < 0 || static_cast<std::size_t>(it) >= f.nt ||
        static_cast<std::size_t>(iq) >= f.nq || std::abs(xt - static_cast<double>(it)) > 1e-6 ||
        std::abs(xq - static_cast<double>(iq)) > 1e-6)
        throw std::invalid_argument("tabulated wave function probed off the table nodes");
    return {static_cast<std::size_t>(it), static_cast<std::size_t>(iq)};
}

/// Physicists' Hermite polynomial H_n(x) and the values needed for the
/// q-derivatives, via the recurrences H_{n+1} = 2x H_n - 2n H_{n-1} and
/// H_n' = 2n H_{n-1}.
double hermite(int n, double x) {
    double h0 = 1.0, h1 = 2.0 * x;
    if (n == 0) return h0;
    if (n == 1) return h1;
    for (int j = 2; j <= n; ++j) {
        const double h2 = 2.0 * x * h1 - 2.0 * (j - 1) * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

}  // namespace

WaveFunction WaveFunction::plane_wave(double k, double E, double hbar) {
    if (!(hbar > 0.0)) throw std::invalid_argument("plane_wave: hbar must be > 0");
    return WaveFunction(Kind::PlaneWave, {k, E}, hbar);
}

WaveFunction WaveFunction::harmonic_eigenstate(int n_level, double m, double omega, double hbar) {
    if (n_level < 0) throw std::invalid_argument("harmonic_eigenstate: n_level must be >= 0");
    if (!(m > 0.0) || !(omega > 0.0) || !(hbar > 0.0))
        throw std::invalid_argument("harmonic_eigenstate: m, omega, hbar must be > 0");
    return WaveFunction(Kind::Harmonic, {static_cast<double>(n_level), m, omega}, hbar);
}

WaveFunction WaveFunction::tabulated(Tabulated2D field) {
    if (field.nt < 3 || field.nq < 3)
        throw std::invalid_argument("tabulated wave function needs at least a 3x3 field");
    if (field.values.size() != field.nt * field.nq)
        throw std::invalid_argument("tabulated wave function has inconsistent value count");
    return WaveFunction(Kind::Tabulated, {}, 1.0, std::move(field));
}

std::string WaveFunction::kind_name() const {
    switch (kind_) {
        case Kind::PlaneWave: return "plane_wave";
        case Kind::Harmonic: return "harmonic_eigenstate";
        case Kind::Tabulated: return "tabulated";
    }
    return "?";
}

cplx WaveFunction::value(double t, double q) const {
    switch (kind_) {
        case Kind::PlaneWave:
            return std::exp(I * (par_[0] * q - par_[1] * t / hbar_));
        case Kind::Harmonic: {
            const int n = static_cast<int>(par_[0]);
            const double m = par_[1], w = par_[2];
            const double alpha = std::sqrt(m * w / hbar_);
            const double En = (n + 0.5) * hbar_ * w;
            return hermite(n, alpha * q) * std::exp(-0.5 * alpha * alpha * q * q) *
                   std::exp(-I * En * t / hbar_);
        }
        case Kind::Tabulated: {
            const auto [it, iq] = table_index(*tab_, t, q);
            return tab_->at(it, iq);
        }
    }
    throw std::logic_error("unreachable");
}

cplx WaveFunction::dt(double t, double q) const {
    switch (kind_) {
        case Kind::PlaneWave:
            return -I * par_[1] / hbar_ * value(t, q);
        case Kind::Harmonic: {
            const int n = static_cast<int>(par_[0]);
            const double En = (n + 0.5) * hbar_ * par_[2];
            return -I * En / hbar_ * value(t, q);
        }
        case Kind::Tabulated: {
            const auto [it, iq] = table_index(*tab_, t, q);
            if (it < 1 || it + 1 >= tab_->nt)
                throw std::invalid_argument("tabulated dt probed at the table border");
            return (tab_->at(it + 1, iq) - tab_->at(it - 1, iq)) / (2.0 * tab_->dt);
        }
    }
    throw std::logic_error("unreachable");
}

cplx WaveFunction::dq(double t, double q) const {
    switch (kind_) {
        case Kind::PlaneWave:
            return I * par_[0] * value(t, q);
        case Kind::Harmonic: {
            const int n = static_cast<int>(par_[0]);
            const double m = par_[1], w = par_[2];
            const double alpha = std::sqrt(m * w / hbar_);
            const double x = alpha * q;
            const double P = hermite(n, x);
            const double Pp = n > 0 ? 2.0 * n * hermite(n - 1, x) : 0.0;
            const double G = std::exp(-0.5 * x * x);
            const cplx phase = std::exp(-I * (n + 0.5) * par_[2] * t);
            return (alpha * Pp - alpha * alpha * q * P) * G * phase;
        }
        case Kind::Tabulated: {
            const auto [it, iq] = table_index(*tab_, t, q);
            if (iq < 1 || iq + 1 >= tab_->nq)
                throw std::invalid_argument("tabulated dq probed at the table border");
            return (tab_->at(it, iq + 1) - tab_->at(it, iq - 1)) / (2.0 * tab_->dq);
        }
    }
    throw std::logic_error("unreachable");
}

cplx WaveFunction::dqq(double t, double q) const {
    switch (kind_) {
        case Kind::PlaneWave:
            return -par_[0] * par_[0] * value(t, q);
        case Kind::Harmonic: {
            const int n = static_cast<int>(par_[0]);
            const double m = par_[1], w = par_[2];
            const double alpha = std::sqrt(m * w / hbar_);
            const double x = alpha * q;
            const double P = hermite(n, x);
            const double Pp = n > 0 ? 2.0 * n * hermite(n - 1, x) : 0.0;
            const double Ppp = n > 1 ? 4.0 * n * (n - 1) * hermite(n - 2, x) : 0.0;
            const double G = std::exp(-0.5 * x * x);
            const double a2 = alpha * alpha;
            const cplx phase = std::exp(-I * (n + 0.5) * par_[2] * t);
            // (P G)'' with G' = -a2 q G and G'' = (a2^2 q^2 - a2) G
            const double bracket = a2 * Ppp - 2.0 * a2 * alpha * q * Pp +
                                   (a2 * a2 * q * q - a2) * P;
            return bracket * G * phase;
        }
        case Kind::Tabulated: {
            const auto [it, iq] = table_index(*tab_, t, q);
            if (iq < 1 || iq + 1 >= tab_->nq)
                throw std::invalid_argument("tabulated dqq probed at the table border");
            return (tab_->at(it, iq + 1) - 2.0 * tab_->at(it, iq) + tab_->at(it, iq - 1)) /
                   (tab_->dq * tab_->dq);
        }
    }
    throw std::logic_error("unreachable");
}

cplx WaveFunction::dlog_dq(double t, double q) const {
    const cplx v = value(t, q);
    if (std::abs(v) < 1e-300)
        throw std::domain_error("wave function vanishes at the probe point (t=" +
                                std::to_string(t) + ", q=" + std::to_string(q) + ")");
    return dq(t, q) / v;
}

cplx flow_velocity(const WaveFunction& psi, const SchrodingerParams& par, FlowVariant variant,
                   double t, double q) {
    const cplx logd = psi.dlog_dq(t, q);
    if (variant == FlowVariant::Nonlinear) return -2.0 * I * par.gamma * logd;
    return -I * par.hbar / par.m * logd;
}

GridFunction a_eps(const GridFunction& q, ScaleParams eps) {
    const GridFunction dp = delta_plus(q, eps), dm = delta_minus(q, eps);
    return detail::map2(dp, dm, [](double, cplx p, cplx m) {
        const cplx p2 = p * p, m2 = m * m;
        return 0.5 * ((p2 - m2) - I * (p2 + m2));
    });
}

namespace {

template <typename ResidualAt>
ResidualField2D probe_field(const ProbeGrid2D& probe, ResidualAt&& at) {
    ResidualField2D field;
    field.t.reserve(probe.nt * probe.nq);
    field.q.reserve(probe.nt * probe.nq);
    field.residual.reserve(probe.nt * probe.nq);
    for (std::size_t it = 0; it < probe.nt; ++it) {
        const double t = probe.t0 + static_cast<double>(it) * probe.dt;
        for (std::size_t iq = 0; iq < probe.nq; ++iq) {
            const double q = probe.q0 + static_cast<double>(iq) * probe.dq;
            const cplx r = at(it, t, q);
            field.t.push_back(t);
            field.q.push_back(q);
            field.residual.push_back(r);
            field.sup = std::max(field.sup, std::abs(r));
        }
    }
    return field;
}

cplx nonlinear_residual_at(const WaveFunction& psi, const SchrodingerParams& par, double t,
                           double q, cplx a) {
    const cplx v = psi.value(t, q);
    if (std::abs(v) < 1e-300)
        throw std::domain_error("wave function vanishes at the probe point");
    const cplx dq = psi.dq(t, q);
    const cplx alpha = par.alpha_fn ? par.alpha_fn->eval(q) : cplx{0.0, 0.0};
    const cplx bracket = -(dq * dq / v) * (I * par.gamma + 0.5 * a) + psi.dt(t, q) +
                         0.5 * a * psi.dqq(t, q);
    return 2.0 * I * par.gamma * par.m * bracket - (par.U.eval(q) + alpha) * v;
}

}  // namespace

ResidualField2D nonlinear_pde_residual(const WaveFunction& psi, const SchrodingerParams& par,
                                       const ProbeGrid2D& probe, cplx a_value) {
    return probe_field(probe, [&](std::size_t, double t, double q) {
        return nonlinear_residual_at(psi, par, t, q, a_value);
    });
}

ResidualField2D nonlinear_pde_residual(const WaveFunction& psi, const SchrodingerParams& par,
                                       const ProbeGrid2D& probe, const GridFunction& a_series) {
    return probe_field(probe, [&](std::size_t, double t, double q) {
        const std::size_t i = a_series.grid().index_of(t);
        return nonlinear_residual_at(psi, par, t, q, a_series.value(i));
    });
}

ResidualField2D linear_pde_residual(const WaveFunction& psi, const SchrodingerParams& par,
                                    const ProbeGrid2D& probe) {
    const double hb = par.hbar;
    return probe_field(probe, [&](std::size_t, double t, double q) {
        return I * hb * psi.dt(t, q) + hb * hb / (2.0 * par.m) * psi.dqq(t, q) -
               par.U.eval(q) * psi.value(t, q);
    });
}

namespace {

ConstancyReport constant_along_path(const WaveFunction& psi, const GridFunction& path,
                                    const std::function<cplx(cplx, double)>& combine) {
    const GridFunction series = detail::map(path, [&](double t, cplx qv) {
        return combine(psi.dlog_dq(t, qv.real()), qv.real());
    });
    ConstancyReport rep;
    rep.series = series.restricted_to_core();
    rep.reference = rep.series.value(rep.series.lo_valid());
    double drift = 0.0;
    for (std::size_t i = rep.series.lo_valid(); i <= rep.series.hi_valid(); ++i)
        drift = std::max(drift, std::abs(rep.series.raw()[i] - rep.reference));
    rep.max_drift = drift;
    return rep;
}

}  // namespace

ConstancyReport nonlinear_constant_of_motion(const WaveFunction& psi, const SchrodingerParams& par,
                                             const GridFunction& path) {
    return constant_along_path(psi, path, [&](cplx logd, double q) {
        const cplx gl = par.gamma * logd;
        return -2.0 * par.m * gl * gl + par.U.eval(q);
    });
}

ConstancyReport linear_constant_of_motion(const WaveFunction& psi, const SchrodingerParams& par,
                                          const GridFunction& path) {
    return constant_along_path(psi, path, [&](cplx logd, double q) {
        const cplx hl = par.hbar * logd;
        return -hl * hl / (2.0 * par.m) + par.U.eval(q);
    });
}

SideConditionReport linear_side_condition_check(const GridFunction& path,
                                                const SchrodingerParams& par, ScaleParams eps,
                                                double tol_rel) {
    SideConditionReport rep;
    rep.required = -I * par.hbar / par.m;
    const GridFunction a = a_eps(path, eps).restricted_to_core();
    double dev = 0.0;
    for (std::size_t i = a.lo_valid(); i <= a.hi_valid(); ++i)
        dev = std::max(dev, std::abs(a.raw()[i] - rep.required));
    rep.max_dev = dev;
    rep.tolerance = tol_rel * std::abs(rep.required);
    rep.holds = dev <= rep.tolerance;
    return rep;
}

}  // namespace qsc
