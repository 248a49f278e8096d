#include "sobench/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace sobench::bounds {

void validate(const BoundQuery& q) {
  if (q.k < 0 || q.k > 2) throw std::domain_error("loss order k must be 0, 1 or 2");
  if (!(q.n > q.k)) throw std::domain_error("smoothness n must exceed the loss order k");
  if (!(q.W >= 3.0)) throw std::domain_error("parameter count W must be >= 3");
  if (!(q.M >= 2.0)) throw std::domain_error("sample count M must be >= 2");
  if (q.d < 1) throw std::domain_error("dimension d must be >= 1");
}

double guarded_ln(double x) { return x <= std::exp(1.0) ? 1.0 : std::log(x); }
double guarded_log2(double x) { return x <= 2.0 ? 1.0 : std::log2(x); }

double denn_bound(const BoundQuery& q, const BoundConstants& c) {
  validate(q);
  const double m = q.n - q.k;
  const double expo = 4.0 * m / q.d;
  double approx, sample;
  if (c.include_logs) {
    const double lw = guarded_ln(q.W);
    approx = std::pow(q.W / (lw * lw), -expo);
    sample = (q.W * q.W / q.M) * guarded_ln(q.M);
  } else {
    approx = std::pow(q.W, -expo);
    sample = q.W * q.W / q.M;
  }
  return c.C * (approx + sample);
}

double wenn_bound(const BoundQuery& q, const BoundConstants& c) {
  validate(q);
  const double expo = 2.0 * (q.n - q.k) / q.d;
  const double approx = std::pow(q.W, -expo);
  const double sample = (q.W / q.M) * (c.include_logs ? guarded_ln(q.M) : 1.0);
  return c.C * (approx + sample);
}

double rademacher_bound(const BoundQuery& q, const BoundConstants& c) {
  validate(q);
  const double expo = 4.0 * (q.n - q.k) / q.d;
  double approx;
  if (c.include_logs) {
    const double lw = guarded_ln(q.W);
    approx = std::pow(q.W / (lw * lw), -expo);
  } else {
    approx = std::pow(q.W, -expo);
  }
  const double sample = (q.W / std::sqrt(q.M)) * (c.include_logs ? guarded_ln(q.M) : 1.0);
  return c.C * (approx + sample);
}

double general_fc_bound(double N, double L, double M, double n, int d, int k,
                        const BoundConstants& c) {
  if (!(n > k)) throw std::domain_error("smoothness n must exceed the loss order k");
  if (N < 1 || L < 1 || M < 2 || d < 1) throw std::domain_error("invalid general_fc_bound query");
  const double expo = 4.0 * (n - k) / d;
  const double approx = std::pow(N * L, -expo);
  double sample = N * N * L * L / M;
  if (c.include_logs) sample *= guarded_ln(N) * guarded_ln(L) * guarded_ln(M);
  return c.C * (approx + sample);
}

double approximation_rate(double N, double L, double n, int d, int k, const BoundConstants& c) {
  if (!(n > k)) throw std::domain_error("smoothness n must exceed the loss order k");
  if (N < 1 || L < 1 || d < 1) throw std::domain_error("invalid approximation_rate query");
  return c.C3k * std::pow(N * L, -2.0 * (n - k) / d);
}

double optimal_rate(double M, double n, int d, int k) {
  if (!(n > k)) throw std::domain_error("smoothness n must exceed the loss order k");
  if (M < 2 || d < 1) throw std::domain_error("invalid optimal_rate query");
  const double m = n - k;
  return std::pow(M, -2.0 * m / (2.0 * m + d));
}

double optimal_width(double M, double n, int d) {
  if (M < 2 || d < 1 || n <= 0) throw std::domain_error("invalid optimal_width query");
  return std::pow(M, d / (2.0 * d + 4.0 * n));
}

double crossover_M(double W, double n, int d, int k) {
  if (!(n > k)) throw std::domain_error("smoothness n must exceed the loss order k");
  if (W < 1 || d < 1) throw std::domain_error("invalid crossover query");
  return std::pow(W, (2.0 * n + 2.0 * d - 2.0 * k) / d);
}

double denn_bound_at_optimal_width(double M, double n, int d, int k, const BoundConstants& c) {
  if (!(n > k)) throw std::domain_error("smoothness n must exceed the loss order k");
  if (M < 2 || d < 1) throw std::domain_error("invalid query");
  const double W = optimal_width(M, n - k, d);
  const double approx = std::pow(W, -4.0 * (n - k) / d);
  const double sample = (W * W / M) * (c.include_logs ? guarded_ln(M) : 1.0);
  return c.C * (approx + sample);
}

double optimal_width_slope(const std::vector<double>& Ms, double n, int d, int k,
                           const BoundConstants& c) {
  if (Ms.size() < 2) throw std::invalid_argument("slope needs at least two M values");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double M : Ms) {
    const double x = std::log(M);
    const double y = std::log(denn_bound_at_optimal_width(M, n, d, k, c));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double nn = static_cast<double>(Ms.size());
  return (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
}

const char* to_string(RegionVerdict::Tag t) {
  switch (t) {
    case RegionVerdict::Tag::denn: return "denn";
    case RegionVerdict::Tag::wenn: return "wenn";
    case RegionVerdict::Tag::transitional: return "transitional";
  }
  return "?";
}

RegionVerdict recommend(const BoundQuery& q, const BoundConstants& c, double tau) {
  validate(q);
  BoundConstants power = c;
  power.include_logs = false;
  RegionVerdict v;
  v.margin = denn_bound(q, power) / wenn_bound(q, power);
  const double cross = crossover_M(q.W, q.n, q.d, q.k);
  if (q.M >= tau * cross)
    v.tag = RegionVerdict::Tag::denn;
  else if (q.M <= cross / tau)
    v.tag = RegionVerdict::Tag::wenn;
  else
    v.tag = RegionVerdict::Tag::transitional;
  return v;
}

std::vector<CurvePoint> fig1_curve(int k, double n, int d, const std::vector<double>& Ws) {
  std::vector<CurvePoint> pts;
  pts.reserve(Ws.size());
  for (double W : Ws) pts.push_back(CurvePoint{W, crossover_M(W, n, d, k)});
  return pts;
}

double pdim_bound(PdimClass cls, double N, double L, const BoundConstants& c) {
  if (N < 1 || L < 1) throw std::domain_error("pdim_bound needs N, L >= 1");
  const double constant =
      (cls == PdimClass::f0 || cls == PdimClass::squared) ? c.C_hat : c.C_bar;
  return constant * N * N * L * L * guarded_log2(L) * guarded_log2(N);
}

double covering_bound(double eps, double pdim, double m, double B) {
  if (eps <= 0.0) throw std::domain_error("covering_bound needs eps > 0");
  if (pdim < 1) throw std::domain_error("covering_bound needs pdim >= 1");
  if (m < pdim) throw std::domain_error("covering_bound needs m >= pdim");
  const double e = std::exp(1.0);
  return pdim * guarded_ln(2.0 * e * m * B / (eps * pdim));
}

double covering_bound_uniform_params(double delta, double W, double L, double F,
                                     CoveringVariant, const BoundConstants& c) {
  if (delta <= 0.0 || W < 1 || L < 0) throw std::domain_error("invalid covering query");
  const double fmax = F > 1.0 ? F : 1.0;
  return c.C * (W * (L + 1.0) * std::log(fmax * (W + 1.0)) + W * std::log((L + 1.0) / delta));
}

double sample_error_bound(int k, double M, double B, int d, double pdim_value,
                          double pdim_derivative) {
  if (k < 0 || k > 2) throw std::domain_error("loss order k must be 0, 1 or 2");
  if (M < 2 || B < 1 || d < 1) throw std::domain_error("invalid sample_error query");
  const double b4 = B * B * B * B;
  double total = (5136.0 * b4 / M) * (covering_bound(1.0 / (80.0 * B * M), pdim_value, M, B) + 1.0);
  if (k >= 1) {
    const double d4 = static_cast<double>(d) * d * d * d;
    const double deriv_term =
        (5136.0 * d4 * b4 / M) *
        (covering_bound(1.0 / (80.0 * d * B * M), pdim_derivative, M, B) + 1.0);
    total += (k == 1 ? static_cast<double>(d) : 1.0) * deriv_term;
  }
  return total;
}

double pde_bound(double W, double M1, double M2, double n, int d, PdeVariant variant,
                 const BoundConstants& c) {
  const int k = variant == PdeVariant::ritz ? 1 : 2;
  if (!(n > k)) throw std::domain_error("smoothness n too low for this PDE variant");
  if (W < 3 || M1 < 2 || M2 < 2 || d < 1) throw std::domain_error("invalid pde_bound query");
  const double expo = 4.0 * (n - k) / d;
  double approx, sample;
  if (c.include_logs) {
    const double lw = guarded_ln(W);
    approx = std::pow(W / (lw * lw), -expo);
    sample = W * W * (guarded_ln(M1) / M1 + guarded_ln(M2) / M2);
  } else {
    approx = std::pow(W, -expo);
    sample = W * W * (1.0 / M1 + 1.0 / M2);
  }
  return c.C * (approx + sample);
}

}  // namespace sobench::bounds
