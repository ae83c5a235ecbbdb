#pragma once

#include <cstdint>
#include <vector>

namespace rollscan {

// First `count` points of the one-dimensional Sobol sequence (direction numbers
// 2^-1, 2^-2, ..., Gray-code order, index 0 skipped so the first point is 0.5),
// affinely mapped onto [lo, hi]. Low-discrepancy stimulus placement for staircase
// seeding and open-loop trial schedules.
std::vector<double> sobol_sequence(std::size_t count, double lo, double hi);

struct TrialRecord {
  double stimulus = 0.0;  // stimulus level (latency in ms throughout this project)
  bool correct = false;
};

struct FitOptions {
  double guess_rate = 0.5;   // two-alternative forced choice floor
  double lapse_rate = 1e-4;  // keeps the likelihood finite on perfect runs
};

// psi(x) = guess + (1 - guess - lapse) / (1 + exp(-beta * (x - alpha)))
struct PsychometricFit {
  double alpha = 0.0;  // inflection point, stimulus units
  double beta = 0.0;   // slope, 1 / stimulus units
  double guess_rate = 0.5;
  double lapse_rate = 1e-4;
  double log_likelihood = 0.0;
  bool converged = false;
  // No finite threshold is identified: the optimum sat on the edge of the search
  // box (alpha within half a range of the data, beta in [1e-3, 1e3]), or the fit
  // could not strictly beat a degenerate limit of the curve family (a step at
  // some cut, the curve pinned at its floor, mid or ceiling). Typical of
  // all-correct, all-at-chance or perfectly separated response sets.
  bool on_boundary = false;
};

double psychometric_value(const PsychometricFit& fit, double stimulus);

// Maximum-likelihood logistic fit: coarse grid over the search box picks a seed,
// Nelder-Mead on (alpha, log beta) polishes it. Throws on an empty trial list or
// when every trial sits at one stimulus level.
PsychometricFit fit_logistic(const std::vector<TrialRecord>& trials,
                             const FitOptions& options = {});

// Stimulus level where the fitted curve crosses `criterion` (e.g. 0.75). Throws on
// an unconverged fit or a criterion outside the curve's attainable range.
double threshold_at(const PsychometricFit& fit, double criterion);

}  // namespace rollscan
