#pragma once

#include <string>
#include <vector>

namespace sobench::bounds {

/// Inputs common to the generalization-bound formulas.
struct BoundQuery {
  double W = 3;   // parameter count, >= 3 so log W > 1
  double M = 2;   // sample count, >= 2
  double n = 1;   // target smoothness, > k
  int d = 1;      // input dimension, >= 1
  int k = 0;      // loss order in {0, 1, 2}
};
void validate(const BoundQuery& q);

/// Unnamed constants of the bound statements; all default to 1 and are
/// overridable. include_logs toggles the logarithmic factors (off gives the
/// pure power laws used for order comparisons).
struct BoundConstants {
  double C = 1.0;       // leading constant
  double C1 = 1.0, C2 = 1.0;  // class constants
  double B = 1.0;       // norm budget, >= 1
  double F = 1.0;       // WeNN parameter bound, >= 1
  double C_hat = 1.0;   // value-class pseudo-dimension constant
  double C_bar = 1.0;   // derivative-class pseudo-dimension constant
  double C3k = 1.0;     // approximation-rate constant
  double sigma_noise = 0.0;  // regression noise level (noiseless setting)
  bool include_logs = true;
};

/// Log factors floored at 1 once the argument drops to e (2 for log2); keeps
/// every bound positive and monotone at tiny W, N, L without changing
/// asymptotics. Continuous: ln(e) = 1 and log2(2) = 1.
double guarded_ln(double x);
double guarded_log2(double x);

// --- generalization bounds ----------------------------------------------

/// C [ (W / (ln W)^2)^{-4(n-k)/d} + (W^2 / M) ln M ]; logs off drops both
/// log factors.
double denn_bound(const BoundQuery& q, const BoundConstants& c);

/// C [ W^{-2(n-k)/d} + (W / M) ln M ].
double wenn_bound(const BoundQuery& q, const BoundConstants& c);

/// C [ (W / (ln W)^2)^{-4(n-k)/d} + (W / sqrt(M)) ln M ].
double rademacher_bound(const BoundQuery& q, const BoundConstants& c);

/// C [ (NL)^{-4(n-k)/d} + (N^2 L^2 ln N ln L / M) ln M ] for a general
/// fully connected shape.
double general_fc_bound(double N, double L, double M, double n, int d, int k,
                        const BoundConstants& c);

/// C_{3,k} (NL)^{-2(n-k)/d}.
double approximation_rate(double N, double L, double n, int d, int k, const BoundConstants& c);

/// M^{-2(n-k)/(2(n-k)+d)} and the companion width rule W = M^{d/(2d+4n)}.
double optimal_rate(double M, double n, int d, int k);
double optimal_width(double M, double n, int d);

/// Sample count where the DeNN order overtakes the WeNN order:
/// W^{(2n+2d-2k)/d}.
double crossover_M(double W, double n, int d, int k);

/// Bound along the optimal-width trajectory W(M) = M^{d/(2d+4(n-k))}, where
/// approximation and sample terms share the same power of M; with logs on
/// the sample term carries its ln M factor. This is the curve whose log-log
/// slope realizes the optimal rate.
double denn_bound_at_optimal_width(double M, double n, int d, int k, const BoundConstants& c);

/// Least-squares slope of log(bound) against log(M) over the given M grid,
/// along the optimal-width trajectory.
double optimal_width_slope(const std::vector<double>& Ms, double n, int d, int k,
                           const BoundConstants& c);

// --- region classification ------------------------------------------------

struct RegionVerdict {
  enum class Tag { denn, wenn, transitional };
  Tag tag = Tag::transitional;
  double margin = 1.0;  // denn_bound / wenn_bound, logs off
};
const char* to_string(RegionVerdict::Tag t);

/// Classifies (W, M) against the crossover curve: denn when M exceeds
/// tau * crossover_M, wenn when M falls below crossover_M / tau,
/// transitional in between. margin reports the logs-off bound ratio.
RegionVerdict recommend(const BoundQuery& q, const BoundConstants& c, double tau = 1.5);

/// Crossover curve points (W, crossover_M(W)) for the given loss order.
struct CurvePoint {
  double W, M;
};
std::vector<CurvePoint> fig1_curve(int k, double n, int d, const std::vector<double>& Ws);

// --- capacity and covering bounds -----------------------------------------

enum class PdimClass { f0, dkf1, laplacian_f2, squared };

/// constant * N^2 L^2 log2(L) log2(N); all four classes share the form,
/// with the constant picked by class tag (C_hat for f0/squared, C_bar for
/// the derivative classes).
double pdim_bound(PdimClass cls, double N, double L, const BoundConstants& c);

/// Log uniform covering number from a pseudo-dimension:
/// pdim * ln(2 e m B / (eps * pdim)), valid for m >= pdim.
double covering_bound(double eps, double pdim, double m, double B);

enum class CoveringVariant { value, first_derivative, second_derivative };

/// W(L+1) ln((F v 1)(W+1)) + W ln((L+1)/delta), times C; the three variants
/// share the form.
double covering_bound_uniform_params(double delta, double W, double L, double F,
                                     CoveringVariant variant, const BoundConstants& c);

/// Sample-error expression: (5136 B^4 / M)(logcover + 1) at eps = 1/(80 B M),
/// plus for k = 1 the d-summed derivative-class terms with d^4 B^4 constants
/// at eps = 1/(80 d B M), and for k = 2 the single Laplacian-class term.
double sample_error_bound(int k, double M, double B, int d, double pdim_value,
                          double pdim_derivative);

// --- PDE variants -----------------------------------------------------------

enum class PdeVariant { ritz, pinn };

/// C [ (W/(ln W)^2)^{-4(n-1)/d} + W^2 (ln M1/M1 + ln M2/M2) ] for ritz;
/// pinn uses exponent 4(n-2)/d.
double pde_bound(double W, double M1, double M2, double n, int d, PdeVariant variant,
                 const BoundConstants& c);

}  // namespace sobench::bounds
