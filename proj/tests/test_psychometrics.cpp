#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "rollscan/psychometrics.hpp"
#include "rollscan/time_utils.hpp"

using namespace rollscan;

namespace {

// Star discrepancy of points in [0, 1]: D* = 1/(2n) + max_i |u_(i) - (2i-1)/(2n)|.
double star_discrepancy(std::vector<double> unit_points) {
  std::sort(unit_points.begin(), unit_points.end());
  const double n = static_cast<double>(unit_points.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < unit_points.size(); ++i) {
    const double target = (2.0 * static_cast<double>(i) + 1.0) / (2.0 * n);
    worst = std::max(worst, std::abs(unit_points[i] - target));
  }
  return 1.0 / (2.0 * n) + worst;
}

std::vector<TrialRecord> synthetic_trials(double alpha, double beta,
                                          const std::vector<double>& stimuli,
                                          std::uint64_t seed) {
  PsychometricFit truth;
  truth.alpha = alpha;
  truth.beta = beta;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<TrialRecord> trials;
  trials.reserve(stimuli.size());
  for (double x : stimuli)
    trials.push_back({x, unit(rng) < psychometric_value(truth, x)});
  return trials;
}

// Trials that pin the curve: 20 trials at each of ten levels with the correct
// count matching the true curve's proportion exactly, so the likelihood has a
// clean interior optimum near the generating parameters.
std::vector<TrialRecord> graded_trials() {
  PsychometricFit truth;
  truth.alpha = 10.0;
  truth.beta = 0.5;
  std::vector<TrialRecord> trials;
  for (double x = 1.0; x <= 19.0; x += 2.0) {
    const int n = 20;
    const int k = static_cast<int>(std::lround(n * psychometric_value(truth, x)));
    for (int i = 0; i < n; ++i) trials.push_back({x, i < k});
  }
  return trials;
}

}  // namespace

TEST_CASE("sobol sequence: first points and determinism") {
  CHECK(sobol_sequence(0, 0.0, 25.0).empty());
  const std::vector<double> one = sobol_sequence(1, 0.0, 25.0);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == 12.5);  // 0.5 after the skipped zero point

  const std::vector<double> three = sobol_sequence(3, 0.0, 25.0);
  CHECK(three[0] == 12.5);
  CHECK(three[1] == 18.75);
  CHECK(three[2] == 6.25);

  CHECK(sobol_sequence(100, 0.0, 25.0) == sobol_sequence(100, 0.0, 25.0));
  // Prefix property: the first k points do not depend on the count requested.
  const std::vector<double> fifty = sobol_sequence(50, 0.0, 25.0);
  const std::vector<double> twenty(fifty.begin(), fifty.begin() + 20);
  CHECK(twenty == sobol_sequence(20, 0.0, 25.0));

  for (double p : fifty) {
    CHECK(p >= 0.0);
    CHECK(p <= 25.0);
  }
  CHECK_THROWS_AS(sobol_sequence(5, 1.0, 0.0), validation_error);
}

TEST_CASE("sobol coverage beats the average random draw by star discrepancy") {
  std::vector<double> sobol_unit = sobol_sequence(50, 0.0, 1.0);
  const double sobol_disc = star_discrepancy(sobol_unit);

  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double total = 0.0;
  const int kDraws = 1000;
  for (int rep = 0; rep < kDraws; ++rep) {
    std::vector<double> pts(50);
    for (double& p : pts) p = unit(rng);
    total += star_discrepancy(pts);
  }
  const double mean_random = total / kDraws;
  CHECK(sobol_disc < mean_random);
}

TEST_CASE("psychometric curve shape: floor, ceiling, monotonicity") {
  PsychometricFit fit;
  fit.alpha = 10.0;
  fit.beta = 0.5;
  CHECK(psychometric_value(fit, -100.0) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(psychometric_value(fit, 1000.0) == doctest::Approx(1.0 - 1e-4).epsilon(1e-9));
  CHECK(psychometric_value(fit, 10.0) ==
        doctest::Approx(0.5 + (1.0 - 0.5 - 1e-4) / 2.0).epsilon(1e-12));
  double prev = 0.0;
  for (double x = 0.0; x <= 30.0; x += 0.5) {
    const double p = psychometric_value(fit, x);
    CHECK(p >= prev);
    prev = p;
  }
}

TEST_CASE("fit recovers the generating parameters from graded proportions") {
  const PsychometricFit fit = fit_logistic(graded_trials());
  CHECK(fit.converged);
  CHECK(!fit.on_boundary);
  CHECK(fit.alpha > 8.0);
  CHECK(fit.alpha < 12.0);
  CHECK(fit.beta > 0.2);
  CHECK(fit.beta < 1.0);
}

TEST_CASE("perfectly separated responses are flagged, not fitted") {
  // Chance performance below the gap, perfection above: a step at any cut in the
  // gap explains the data as well as any finite slope, so the slope is only
  // bounded from below and the fit must refuse to report a threshold.
  std::vector<TrialRecord> trials;
  int flip = 0;
  for (double x : {1.0, 2.0, 3.0, 4.0})
    for (int rep = 0; rep < 10; ++rep) trials.push_back({x, (flip++ % 2) == 0});
  for (double x : {21.0, 22.0, 23.0, 24.0})
    for (int rep = 0; rep < 10; ++rep) trials.push_back({x, true});
  const PsychometricFit fit = fit_logistic(trials);
  CHECK(!fit.converged);
  CHECK(fit.on_boundary);
  CHECK_THROWS_AS(threshold_at(fit, 0.75), validation_error);
}

TEST_CASE("fitted likelihood dominates a 100x100 grid over the search box") {
  const std::vector<double> stimuli = sobol_sequence(200, 0.0, 25.0);
  const std::vector<TrialRecord> trials = synthetic_trials(10.0, 0.5, stimuli, 77);
  const PsychometricFit fit = fit_logistic(trials);
  REQUIRE(fit.converged);

  const FitOptions opt;
  const auto loglik = [&](double alpha, double beta) {
    PsychometricFit f;
    f.alpha = alpha;
    f.beta = beta;
    f.guess_rate = opt.guess_rate;
    f.lapse_rate = opt.lapse_rate;
    double ll = 0.0;
    for (const TrialRecord& t : trials) {
      const double p = std::clamp(psychometric_value(f, t.stimulus), 1e-12, 1.0 - 1e-12);
      ll += t.correct ? std::log(p) : std::log1p(-p);
    }
    return ll;
  };

  // The documented search box: alpha within half a range of the data, beta
  // log-spaced across [1e-3, 1e3].
  const double alpha_lo = 0.0 - 12.5, alpha_hi = 25.0 + 12.5;
  double grid_best = -1e300;
  for (int i = 0; i < 100; ++i) {
    const double alpha = alpha_lo + (alpha_hi - alpha_lo) * (i + 0.5) / 100.0;
    for (int j = 0; j < 100; ++j) {
      const double beta =
          std::exp(std::log(1e-3) + (std::log(1e3) - std::log(1e-3)) * (j + 0.5) / 100.0);
      grid_best = std::max(grid_best, loglik(alpha, beta));
    }
  }
  CHECK(fit.log_likelihood >= grid_best - 1e-6);
  CHECK(fit.log_likelihood == doctest::Approx(loglik(fit.alpha, fit.beta)).epsilon(1e-9));
}

TEST_CASE("duplicating every trial leaves the fitted parameters unchanged") {
  // Moderate slope: steep generating curves can produce responses with some cut
  // point above which every answer is correct, and such a sample is genuinely
  // step-like (no finite maximum-likelihood slope exists). This one is graded.
  const std::vector<double> stimuli = sobol_sequence(120, 0.0, 25.0);
  const std::vector<TrialRecord> trials = synthetic_trials(9.0, 0.45, stimuli, 1);
  std::vector<TrialRecord> doubled = trials;
  doubled.insert(doubled.end(), trials.begin(), trials.end());

  const PsychometricFit base = fit_logistic(trials);
  const PsychometricFit twice = fit_logistic(doubled);
  REQUIRE(base.converged);
  REQUIRE(twice.converged);
  CHECK(twice.alpha == doctest::Approx(base.alpha).epsilon(1e-5));
  CHECK(twice.beta == doctest::Approx(base.beta).epsilon(1e-4));
  CHECK(twice.log_likelihood == doctest::Approx(2.0 * base.log_likelihood).epsilon(1e-6));
}

TEST_CASE("shifting all stimuli translates alpha and the threshold") {
  const std::vector<double> stimuli = sobol_sequence(150, 0.0, 25.0);
  const std::vector<TrialRecord> trials = synthetic_trials(11.0, 0.45, stimuli, 21);
  std::vector<TrialRecord> shifted = trials;
  const double c = 4.0;
  for (TrialRecord& t : shifted) t.stimulus += c;

  const PsychometricFit base = fit_logistic(trials);
  const PsychometricFit moved = fit_logistic(shifted);
  REQUIRE(base.converged);
  REQUIRE(moved.converged);
  CHECK(moved.alpha == doctest::Approx(base.alpha + c).epsilon(1e-5));
  CHECK(moved.beta == doctest::Approx(base.beta).epsilon(1e-4));
  CHECK(threshold_at(moved, 0.75) ==
        doctest::Approx(threshold_at(base, 0.75) + c).epsilon(1e-5));
}

TEST_CASE("threshold: midpoint criterion, monotonicity, range checks") {
  PsychometricFit fit;
  fit.alpha = 10.0;
  fit.beta = 0.5;
  fit.converged = true;
  const double midpoint = (fit.guess_rate + 1.0 - fit.lapse_rate) / 2.0;
  CHECK(threshold_at(fit, midpoint) == doctest::Approx(10.0).epsilon(1e-12));

  double prev = -1e300;
  for (double crit = 0.55; crit < 0.999; crit += 0.05) {
    const double th = threshold_at(fit, crit);
    CHECK(th > prev);
    prev = th;
  }
  CHECK_THROWS_AS(threshold_at(fit, 0.5), validation_error);     // at the guess floor
  CHECK_THROWS_AS(threshold_at(fit, 0.99995), validation_error); // above the ceiling
  PsychometricFit bad = fit;
  bad.converged = false;
  CHECK_THROWS_AS(threshold_at(bad, 0.75), validation_error);
}

TEST_CASE("threshold recovery on one synthetic observer") {
  // The session design the recovery guarantee is stated for: a coarse survey
  // block plus a focused block straddling the expected threshold.
  std::vector<double> stimuli = sobol_sequence(30, 0.0, 25.0);
  const std::vector<double> focused = sobol_sequence(170, 6.0, 14.0);
  stimuli.insert(stimuli.end(), focused.begin(), focused.end());

  PsychometricFit truth;
  truth.alpha = 10.0;
  truth.beta = 0.5;
  truth.converged = true;
  const double true_threshold = threshold_at(truth, 0.75);
  const PsychometricFit fit = fit_logistic(synthetic_trials(10.0, 0.5, stimuli, 42));
  REQUIRE(fit.converged);
  CHECK(std::abs(threshold_at(fit, 0.75) - true_threshold) < 1.5);
}

TEST_CASE("degenerate runs: all-correct data raises the boundary flag") {
  std::vector<TrialRecord> trials;
  for (double x : sobol_sequence(60, 0.0, 25.0)) trials.push_back({x, true});
  const PsychometricFit fit = fit_logistic(trials);
  CHECK(!fit.converged);
  CHECK(fit.on_boundary);
  CHECK_THROWS_AS(threshold_at(fit, 0.75), validation_error);

  // All-at-chance data is just as unmeasurable: one correct and one incorrect
  // response at every level makes the guessing floor the provable optimum.
  std::vector<TrialRecord> chance;
  for (double x : sobol_sequence(30, 0.0, 25.0)) {
    chance.push_back({x, true});
    chance.push_back({x, false});
  }
  const PsychometricFit flat = fit_logistic(chance);
  CHECK(!flat.converged);
  CHECK(flat.on_boundary);
}

TEST_CASE("fit input validation") {
  CHECK_THROWS_AS(fit_logistic({}), validation_error);
  CHECK_THROWS_AS(fit_logistic({{5.0, true}, {5.0, false}, {5.0, true}}),
                  validation_error);
  FitOptions bad;
  bad.guess_rate = 1.0;
  CHECK_THROWS_AS(fit_logistic(graded_trials(), bad), validation_error);
  bad = FitOptions{};
  bad.lapse_rate = 0.6;
  CHECK_THROWS_AS(fit_logistic(graded_trials(), bad), validation_error);
}
