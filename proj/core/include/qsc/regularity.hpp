#pragma once

#include <array>
#include <functional>
#include <vector>

#include "qsc/fit.hpp"
#include "qsc/grid.hpp"
#include "qsc/scale_ops.hpp"

namespace qsc {

/// Hölder-exponent estimate from the node-aligned oscillation ladder:
/// alpha_hat is the log-log slope of sup_t |f(t+eps) - f(t)| against eps.
struct HolderEstimate {
    double alpha_hat = 0.0;
    double c_hat = 0.0;
    double r2 = 0.0;
    std::vector<LadderPoint> ladder;  // (eps, sup-oscillation)
    bool degenerate = false;          // constant input, exponent undefined
    bool unreliable = false;          // r2 below 0.9
};

HolderEstimate holder_estimate(const GridFunction& f, const std::vector<ScaleParams>& ladder);

/// Hölder class required of a generator used with alpha-regular trajectories:
/// alpha on [1/2, 1], 1 - alpha on (0, 1/2); equals max(alpha, 1 - alpha).
double beta_threshold(double alpha);

/// eps |-> f_eps, a family with sup |f_eps| <= C eps^(alpha-1).
using ScaleFamily = std::function<GridFunction(ScaleParams)>;

/// Empirical check of the two asymptotic claims for a family f_eps against a
/// window h vanishing at the core endpoints:
///   (i)  integral of D(f_eps h) over [a,b]        = o(eps^(alpha+beta-1)),
///   (ii) eps * integral of Op(f_eps) Op'(h)       = o(eps^(alpha+beta)),
/// with Op, Op' running over the scale derivative and its conjugate.
struct LemmaScalingReport {
    ConvergenceFit boundary_fit;                 // claim (i)
    std::array<ConvergenceFit, 4> product_fits;  // claim (ii), Op x Op'
    double threshold_boundary = 0.0;             // alpha + beta - 1
    double threshold_product = 0.0;              // alpha + beta
    double margin = 0.05;
    bool passed = false;

    const ConvergenceFit& worst_product() const;
};

LemmaScalingReport lemma_scaling_check(const GridFunction& h_fn, const ScaleFamily& family,
                                       double alpha, double beta,
                                       const std::vector<ScaleParams>& ladder);

}  // namespace qsc
