#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>

#include "qsc/analytic.hpp"
#include "qsc/grid.hpp"
#include "qsc/io.hpp"
#include "test_util.hpp"

using namespace qsc;
using qsc::test::max_abs_diff;

TEST_CASE("grid geometry and node lookup") {
    Grid g(0.0, 0.25, 5, 2);
    CHECK(g.total() == 9);
    CHECK(g.t(0) == doctest::Approx(-0.5));
    CHECK(g.t(g.core_begin()) == doctest::Approx(0.0));
    CHECK(g.b() == doctest::Approx(1.0));
    CHECK(g.index_of(0.5) == 4);
    CHECK_THROWS_AS(g.index_of(0.37), std::invalid_argument);
    CHECK_THROWS_AS(Grid(0.0, -1.0, 5, 0), std::invalid_argument);
    CHECK_THROWS_AS(Grid(0.0, 1.0, 1, 0), std::invalid_argument);
}

TEST_CASE("sample evaluates the polynomial t^2 on {0, 0.5, 1}") {
    Grid g(0.0, 0.5, 3, 0);
    const GridFunction f = sample(AnalyticFunction::polynomial({0.0, 0.0, 1.0}), g);
    CHECK(f.value(0).real() == doctest::Approx(0.0));
    CHECK(f.value(1).real() == doctest::Approx(0.25));
    CHECK(f.value(2).real() == doctest::Approx(1.0));
    CHECK(f.value(1).imag() == 0.0);
}

TEST_CASE("single-term weierstrass series is cos(pi t)") {
    const AnalyticFunction w = AnalyticFunction::weierstrass(0.5, 3, 1);
    CHECK(w.eval(0.0).real() == doctest::Approx(1.0));
    CHECK(w.eval(1.0).real() == doctest::Approx(-1.0));
}

TEST_CASE("weierstrass parameter validation") {
    CHECK_THROWS_AS(AnalyticFunction::weierstrass(1.5, 3, 4), std::invalid_argument);
    CHECK_THROWS_AS(AnalyticFunction::weierstrass(0.5, 4, 4), std::invalid_argument);
    CHECK_THROWS_AS(AnalyticFunction::weierstrass(0.5, 1, 4), std::invalid_argument);
    // truncation rule: frequencies past the grid's resolving power are rejected
    Grid fine(0.0, 1e-3, 64, 0);
    CHECK_NOTHROW(sample(AnalyticFunction::weierstrass(0.5, 3, 4), fine));
    Grid coarse(0.0, 0.1, 64, 0);
    CHECK_THROWS_AS(sample(AnalyticFunction::weierstrass(0.5, 3, 4), coarse),
                    std::invalid_argument);
}

TEST_CASE("plane phase at (t=0, q=1) with k=2") {
    const AnalyticFunction p = AnalyticFunction::plane_phase(2.0, 2.0);
    const cplx v = p.eval_tq(0.0, 1.0);
    CHECK(v.real() == doctest::Approx(-0.4161468365471424).epsilon(1e-12));
    CHECK(v.imag() == doctest::Approx(0.9092974268256817).epsilon(1e-12));
    // the 1-D sample is the t=0 slice along the coordinate
    Grid g(0.0, 0.5, 3, 0);
    const GridFunction s = sample(p, g);
    CHECK(std::abs(s.value(2) - v) < 1e-15);
}

TEST_CASE("non-finite evaluation is rejected with the node index") {
    Grid g(700.0, 10.0, 4, 0);
    const AnalyticFunction f = AnalyticFunction::exponential(1.0, 0.0, 1.0);  // e^t overflows
    CHECK_THROWS_WITH_AS(sample(f, g), doctest::Contains("node index"), std::invalid_argument);
}

TEST_CASE("sample is bit-deterministic") {
    Grid g(0.0, 1.0 / 1024, 1025, 64);
    const AnalyticFunction w = AnalyticFunction::weierstrass(0.5, 3, 3);
    const GridFunction f1 = sample(w, g), f2 = sample(w, g);
    REQUIRE(f1.raw().size() == f2.raw().size());
    CHECK(std::memcmp(f1.raw().data(), f2.raw().data(), f1.raw().size() * sizeof(cplx)) == 0);
}

TEST_CASE("weierstrass sampling is even in t") {
    Grid g(-1.0, 1.0 / 512, 1025, 0);  // symmetric about 0
    const GridFunction f = sample(AnalyticFunction::weierstrass(0.5, 3, 3), g);
    const std::size_t mid = 512;
    for (std::size_t j = 1; j <= 512; j += 17) {
        const double lhs = f.value(mid - j).real(), rhs = f.value(mid + j).real();
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("shift re-indexes and poisons the lost margin") {
    Grid g(0.0, 0.125, 9, 4);
    const GridFunction t_fn = sample(AnalyticFunction::polynomial({0.0, 1.0}), g);

    const GridFunction s1 = shift(t_fn, 1);
    for (std::size_t i = s1.lo_valid(); i <= s1.hi_valid(); ++i)
        CHECK(s1.value(i).real() == doctest::Approx(g.t(i) + g.h));
    CHECK(s1.hi_valid() == g.total() - 2);
    CHECK_THROWS_AS((void)s1.value(g.total() - 1), std::out_of_range);

    const GridFunction s0 = shift(t_fn, 0);
    CHECK(max_abs_diff(s0, t_fn) == 0.0);
}

TEST_CASE("shift acts as a group on the surviving region") {
    Grid g(0.0, 0.0625, 17, 6);
    const GridFunction f = sample(AnalyticFunction::trig(1.0, 3.0, 0.4), g);
    const GridFunction a = shift(shift(f, 2), -2);
    CHECK(max_abs_diff(a, f) == 0.0);
    const GridFunction b = shift(shift(f, 1), 2);
    const GridFunction c = shift(f, 3);
    CHECK(max_abs_diff(b, c) == 0.0);
}

TEST_CASE("lincomb and pointwise product") {
    Grid g(0.0, 0.125, 9, 0);
    const GridFunction t_fn = sample(AnalyticFunction::polynomial({0.0, 1.0}), g);
    const GridFunction t_sq = sample(AnalyticFunction::polynomial({0.0, 0.0, 1.0}), g);
    const GridFunction zero = lincomb(1.0, t_fn, 0.0, t_sq);
    CHECK(max_abs_diff(zero, t_fn) == 0.0);

    const GridFunction prod = pointwise_mul(t_fn, t_fn);
    CHECK(max_abs_diff(prod, t_sq) == 0.0);

    const GridFunction rot = lincomb(cplx{0.0, 1.0}, t_fn, 0.0, t_fn);
    for (std::size_t i = 0; i < g.total(); ++i) {
        CHECK(rot.value(i).real() == 0.0);
        CHECK(rot.value(i).imag() == doctest::Approx(g.t(i)));
    }

    Grid other(0.0, 0.25, 9, 0);
    const GridFunction mismatched = sample(AnalyticFunction::polynomial({0.0, 1.0}), other);
    CHECK_THROWS_AS(lincomb(1.0, t_fn, 1.0, mismatched), std::invalid_argument);
}

TEST_CASE("trapezoid integrates linear functions exactly") {
    Grid g(0.0, 1.0 / 512, 513, 0);
    const GridFunction t_fn = sample(AnalyticFunction::polynomial({0.0, 1.0}), g);
    const cplx integral = trapezoid(t_fn, 0, g.total() - 1);
    CHECK(integral.real() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("csv round trip preserves samples") {
    Grid g(0.25, 0.125, 9, 0);
    const GridFunction f = sample(AnalyticFunction::plane_phase(1.5, 0.0), g);
    const GridFunction back = gridfunction_from_csv(gridfunction_to_csv(f));
    REQUIRE(back.grid().total() == f.grid().total());
    CHECK(max_abs_diff(back, f) == 0.0);
    CHECK_THROWS_AS(gridfunction_from_csv("t,re,im\n0,0,0\n"), std::invalid_argument);
}

TEST_CASE("json round trip preserves grid split and samples") {
    Grid g(0.25, 0.125, 5, 2);
    const GridFunction f = sample(AnalyticFunction::gaussian(0.5, 0.3), g);
    const GridFunction back = gridfunction_from_json(gridfunction_to_json(f));
    CHECK(back.grid() == f.grid());
    CHECK(max_abs_diff(back, f) == 0.0);
}
