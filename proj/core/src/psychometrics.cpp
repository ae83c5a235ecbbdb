#include "rollscan/psychometrics.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>

#include "rollscan/time_utils.hpp"

namespace rollscan {

namespace {

constexpr double kBetaLo = 1e-3;
constexpr double kBetaHi = 1e3;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct SearchBox {
  double alpha_lo, alpha_hi;
};

double log_likelihood(const std::vector<TrialRecord>& trials, const FitOptions& opt,
                      double alpha, double beta) {
  const double span = 1.0 - opt.guess_rate - opt.lapse_rate;
  double ll = 0.0;
  for (const TrialRecord& trial : trials) {
    double psi = opt.guess_rate + span * sigmoid(beta * (trial.stimulus - alpha));
    psi = std::clamp(psi, 1e-12, 1.0 - 1e-12);
    ll += trial.correct ? std::log(psi) : std::log1p(-psi);
  }
  return ll;
}

double clamped_log(double p) { return std::log(std::clamp(p, 1e-12, 1.0 - 1e-12)); }

// Supremum of the log-likelihood over the degenerate limits of the curve family:
// beta -> infinity turns the curve into a step at an arbitrary cut (whose extreme
// cuts are the alpha -> +/-infinity all-floor / all-ceiling limits) and beta -> 0
// pins the curve at its mid level. A fit that cannot strictly beat every one of
// these has its true optimum at infinity - all-correct, all-at-chance or
// perfectly separated responses - so no finite threshold is identified.
double degenerate_likelihood_sup(std::vector<TrialRecord> trials, const FitOptions& opt) {
  const double span = 1.0 - opt.guess_rate - opt.lapse_rate;
  const double floor_psi = opt.guess_rate;
  const double ceil_psi = opt.guess_rate + span;
  const double mid_psi = opt.guess_rate + 0.5 * span;

  std::sort(trials.begin(), trials.end(),
            [](const TrialRecord& a, const TrialRecord& b) { return a.stimulus < b.stimulus; });

  const auto floor_term = [&](const TrialRecord& t) {
    return t.correct ? clamped_log(floor_psi) : clamped_log(1.0 - floor_psi);
  };
  const auto ceil_term = [&](const TrialRecord& t) {
    return t.correct ? clamped_log(ceil_psi) : clamped_log(1.0 - ceil_psi);
  };

  double mid = 0.0, all_ceiling = 0.0;
  for (const TrialRecord& t : trials) {
    mid += t.correct ? clamped_log(mid_psi) : clamped_log(1.0 - mid_psi);
    all_ceiling += ceil_term(t);
  }
  double best = std::max(mid, all_ceiling);
  // Sweep the step's cut point left to right. A cut is only realisable between
  // distinct stimulus values; the final sweep state is the all-floor limit.
  double ll = all_ceiling;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    ll += floor_term(trials[i]) - ceil_term(trials[i]);
    if (i + 1 == trials.size() || trials[i + 1].stimulus > trials[i].stimulus)
      best = std::max(best, ll);
  }
  return best;
}

// Nelder-Mead over (alpha, log beta); points outside the box score -infinity so
// the simplex stays inside and degenerate fits pile up on the edge instead of
// running away.
struct Simplex2 {
  std::array<std::array<double, 2>, 3> x;
  std::array<double, 3> f;
};

}  // namespace

std::vector<double> sobol_sequence(std::size_t count, double lo, double hi) {
  if (hi < lo) throw validation_error("sobol: hi must be >= lo");
  std::vector<double> out;
  out.reserve(count);
  std::uint32_t state = 0;
  for (std::size_t i = 1; i <= count; ++i) {
    // Gray-code update: flip the direction number of the lowest zero bit of i-1.
    const int bit = std::countr_one(static_cast<std::uint32_t>(i - 1));
    state ^= std::uint32_t{1} << (31 - bit);
    const double unit = static_cast<double>(state) * 0x1.0p-32;
    out.push_back(lo + (hi - lo) * unit);
  }
  return out;
}

double psychometric_value(const PsychometricFit& fit, double stimulus) {
  const double span = 1.0 - fit.guess_rate - fit.lapse_rate;
  return fit.guess_rate + span * sigmoid(fit.beta * (stimulus - fit.alpha));
}

PsychometricFit fit_logistic(const std::vector<TrialRecord>& trials, const FitOptions& opt) {
  if (trials.empty()) throw validation_error("fit: no trials");
  if (opt.guess_rate < 0.0 || opt.guess_rate >= 1.0)
    throw validation_error("fit: guess_rate out of range");
  if (opt.lapse_rate < 0.0 || opt.guess_rate + opt.lapse_rate >= 1.0)
    throw validation_error("fit: lapse_rate out of range");

  double lo = trials.front().stimulus, hi = lo;
  for (const TrialRecord& trial : trials) {
    lo = std::min(lo, trial.stimulus);
    hi = std::max(hi, trial.stimulus);
  }
  if (hi == lo) throw validation_error("fit: all trials share one stimulus level");

  const double range = hi - lo;
  const SearchBox box{lo - 0.5 * range, hi + 0.5 * range};

  const auto objective = [&](double alpha, double log_beta) {
    if (alpha < box.alpha_lo || alpha > box.alpha_hi || log_beta < std::log(kBetaLo) ||
        log_beta > std::log(kBetaHi))
      return -std::numeric_limits<double>::infinity();
    return log_likelihood(trials, opt, alpha, std::exp(log_beta));
  };

  // Coarse seed.
  double best_a = lo + 0.5 * range, best_lb = 0.0;
  double best_ll = -std::numeric_limits<double>::infinity();
  constexpr int kGrid = 48;
  for (int i = 0; i < kGrid; ++i) {
    const double a = box.alpha_lo + (box.alpha_hi - box.alpha_lo) * (i + 0.5) / kGrid;
    for (int j = 0; j < kGrid; ++j) {
      const double lb =
          std::log(kBetaLo) + (std::log(kBetaHi) - std::log(kBetaLo)) * (j + 0.5) / kGrid;
      const double ll = objective(a, lb);
      if (ll > best_ll) {
        best_ll = ll;
        best_a = a;
        best_lb = lb;
      }
    }
  }

  // Nelder-Mead polish, run from the grid seed and then restarted once from its
  // own optimum with a smaller simplex; restarting recovers the accuracy a lone
  // simplex loses when it collapses early along a ridge.
  struct NmResult {
    double a = 0.0, lb = 0.0, ll = -std::numeric_limits<double>::infinity();
    bool converged = false;
  };
  const auto polish = [&](double a0, double lb0, double da, double dlb) {
    if (a0 + da > box.alpha_hi) da = -da;
    if (lb0 + dlb > std::log(kBetaHi)) dlb = -dlb;
    Simplex2 sx;
    sx.x[0] = {a0, lb0};
    sx.x[1] = {a0 + da, lb0};
    sx.x[2] = {a0, lb0 + dlb};
    for (int i = 0; i < 3; ++i) sx.f[i] = objective(sx.x[i][0], sx.x[i][1]);

    bool converged = false;
    for (int iter = 0; iter < 500; ++iter) {
      std::array<int, 3> order{0, 1, 2};
      std::sort(order.begin(), order.end(), [&](int a, int b) { return sx.f[a] > sx.f[b]; });
      const int ib = order[0], im = order[1], iw = order[2];
      if (std::isfinite(sx.f[iw]) && sx.f[ib] - sx.f[iw] < 1e-10 * (1.0 + std::abs(sx.f[ib]))) {
        converged = true;
        break;
      }
      const double cx = (sx.x[ib][0] + sx.x[im][0]) / 2.0;
      const double cy = (sx.x[ib][1] + sx.x[im][1]) / 2.0;
      const double rx = cx + (cx - sx.x[iw][0]), ry = cy + (cy - sx.x[iw][1]);
      const double fr = objective(rx, ry);
      if (fr > sx.f[ib]) {
        const double ex = cx + 2.0 * (cx - sx.x[iw][0]), ey = cy + 2.0 * (cy - sx.x[iw][1]);
        const double fe = objective(ex, ey);
        if (fe > fr) {
          sx.x[iw] = {ex, ey};
          sx.f[iw] = fe;
        } else {
          sx.x[iw] = {rx, ry};
          sx.f[iw] = fr;
        }
      } else if (fr > sx.f[im]) {
        sx.x[iw] = {rx, ry};
        sx.f[iw] = fr;
      } else {
        const double kx = cx + 0.5 * (sx.x[iw][0] - cx), ky = cy + 0.5 * (sx.x[iw][1] - cy);
        const double fk = objective(kx, ky);
        if (fk > sx.f[iw]) {
          sx.x[iw] = {kx, ky};
          sx.f[iw] = fk;
        } else {
          for (int i : {im, iw}) {
            sx.x[i][0] = (sx.x[i][0] + sx.x[ib][0]) / 2.0;
            sx.x[i][1] = (sx.x[i][1] + sx.x[ib][1]) / 2.0;
            sx.f[i] = objective(sx.x[i][0], sx.x[i][1]);
          }
        }
      }
    }

    int ibest = 0;
    for (int i = 1; i < 3; ++i)
      if (sx.f[i] > sx.f[ibest]) ibest = i;
    return NmResult{sx.x[ibest][0], sx.x[ibest][1], sx.f[ibest], converged};
  };

  NmResult nm = polish(best_a, best_lb, 0.05 * range, 0.1);
  const NmResult restarted = polish(nm.a, nm.lb, 0.01 * range, 0.02);
  if (restarted.ll >= nm.ll) nm = restarted;

  PsychometricFit fit;
  fit.alpha = nm.a;
  fit.beta = std::exp(nm.lb);
  fit.guess_rate = opt.guess_rate;
  fit.lapse_rate = opt.lapse_rate;
  fit.log_likelihood = nm.ll;

  const double alpha_margin = 0.01 * (box.alpha_hi - box.alpha_lo);
  const double lb_margin = 0.01 * (std::log(kBetaHi) - std::log(kBetaLo));
  const bool on_box_edge = fit.alpha < box.alpha_lo + alpha_margin ||
                           fit.alpha > box.alpha_hi - alpha_margin ||
                           nm.lb < std::log(kBetaLo) + lb_margin ||
                           nm.lb > std::log(kBetaHi) - lb_margin;
  const bool at_degenerate_limit =
      fit.log_likelihood <= degenerate_likelihood_sup(trials, opt) + 1e-6;
  fit.on_boundary = on_box_edge || at_degenerate_limit;
  fit.converged = nm.converged && !fit.on_boundary && std::isfinite(fit.log_likelihood);
  return fit;
}

double threshold_at(const PsychometricFit& fit, double criterion) {
  if (!fit.converged) throw validation_error("threshold: fit did not converge");
  const double span = 1.0 - fit.guess_rate - fit.lapse_rate;
  const double p = (criterion - fit.guess_rate) / span;
  if (!(p > 0.0 && p < 1.0))
    throw validation_error("threshold: criterion outside the curve's range");
  return fit.alpha + std::log(p / (1.0 - p)) / fit.beta;
}

}  // namespace rollscan
