#include "specfact/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace specfact {

std::vector<double> sample_angles(const std::vector<Complex>& dodge_poles,
                                  int count) {
  if (count < 1) {
    fail(ErrorCode::DimensionMismatch, "sample count must be positive");
  }
  std::vector<double> angles;
  angles.reserve(count);
  for (int k = 0; k < count; ++k) {
    double theta = (2.0 * k + 1.0) * std::numbers::pi / count;
    for (int attempt = 0; attempt < 8; ++attempt) {
      const Complex point = std::polar(1.0, theta);
      bool clear = true;
      for (const auto& pole : dodge_poles) {
        if (std::abs(point - pole) < tol::kPoleDodge) {
          clear = false;
          break;
        }
      }
      if (clear) break;
      theta += tol::kPoleShift;
    }
    angles.push_back(theta);
  }
  return angles;
}

double spectra_match(const StateSpaceModel& m1, const StateSpaceModel& m2,
                     int samples) {
  std::vector<Complex> dodge = poles(m1);
  const auto p2 = poles(m2);
  dodge.insert(dodge.end(), p2.begin(), p2.end());
  double worst = 0.0;
  for (double theta : sample_angles(dodge, samples)) {
    worst = std::max(
        worst, (eval_spectrum(m1, theta) - eval_spectrum(m2, theta)).norm());
  }
  return worst;
}

double spectrum_scale(const StateSpaceModel& m, int samples) {
  double scale = 0.0;
  for (double theta : sample_angles(poles(m), samples)) {
    scale = std::max(scale, eval_spectrum(m, theta).norm());
  }
  return scale;
}

double eig_multiset_distance(const std::vector<Complex>& u,
                             const std::vector<Complex>& v) {
  if (u.size() != v.size()) {
    return std::numeric_limits<double>::infinity();
  }
  std::vector<bool> used(v.size(), false);
  double worst = 0.0;
  for (const auto& value : u) {
    int best = -1;
    double best_abs = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (used[j]) continue;
      const double dist = std::abs(value - v[j]);
      if (best < 0 || dist < best_abs) {
        best = static_cast<int>(j);
        best_abs = dist;
      }
    }
    used[best] = true;
    const double scale =
        1.0 + std::max(std::abs(value), std::abs(v[best]));
    worst = std::max(worst, best_abs / scale);
  }
  return worst;
}

bool same_pole_structure(const StateSpaceModel& m1, const StateSpaceModel& m2,
                         double tol) {
  return eig_multiset_distance(poles(m1), poles(m2)) <= tol;
}

bool same_zero_structure(const StateSpaceModel& m1, const StateSpaceModel& m2,
                         double tol) {
  return eig_multiset_distance(zeros(m1), zeros(m2)) <= tol;
}

double check_lemma_nonsing(const ReferenceFamily& ref) {
  const Eigen::Index n = ref.model().A.rows();
  if (numerical_rank(ref.p_plus_inverse()) < n) {
    fail(ErrorCode::SingularAnchor, "the zero-side anchor is singular");
  }
  if (numerical_rank(ref.q_plus_inverse()) < n) {
    fail(ErrorCode::SingularAnchor, "the pole-side anchor is singular");
  }

  // The maximal pole-flip solution (kernel {0}) inverts the anchor exactly.
  const InvariantSubspace none =
      invariant_subspace(ref.pole_structure(), {});
  const RiccatiSolution q_max = solve_q(ref, none);

  const ReferenceFamily flipped =
      check_admissible(flip_poles(ref, q_max));
  return (flipped.p_plus_inverse() - q_max.matrix - ref.p_plus_inverse())
      .norm();
}

double check_diagram(const ReferenceFamily& ref, const FlipSpec& spec,
                     int samples) {
  const StateSpaceModel w1 = flip_both(ref, spec);
  const StateSpaceModel w2 = flip_both_dual(ref, spec);
  std::vector<Complex> dodge = poles(w1);
  const auto p2 = poles(w2);
  dodge.insert(dodge.end(), p2.begin(), p2.end());
  double worst = 0.0;
  for (double theta : sample_angles(dodge, samples)) {
    const Complex z = std::polar(1.0, theta);
    worst = std::max(worst, (eval_tf(w1, z) - eval_tf(w2, z)).norm());
  }
  return worst;
}

FlipReport full_report(const ReferenceFamily& ref, const FlipSpec& spec,
                       bool include_diagram, int samples) {
  FlipReport report;
  try {
    const FlipComputation comp = flip_both_detail(ref, spec);
    report.factor = comp.model;
    report.riccati_residuals["p"] = comp.p.residual;
    report.riccati_residuals["q"] = comp.q.residual;
    report.riccati_residuals["p_q"] = comp.p_q.residual;
    report.pole_multiset = poles(comp.model);
    report.zero_multiset = zeros(comp.model);

    report.spectral_error = spectra_match(ref.model(), comp.model, samples);
    const double scale = spectrum_scale(ref.model(), samples);
    if (report.spectral_error > tol::kSpectral * (1.0 + scale)) {
      report.failures.push_back("spectral_error");
    }
    if (include_diagram) {
      report.diagram_error = check_diagram(ref, spec, samples);
      if (*report.diagram_error > tol::kSpectral) {
        report.failures.push_back("diagram_error");
      }
    }
  } catch (const Error& e) {
    report.computation_error = e.code();
    report.failures.push_back(e.what());
  }
  report.pass = report.failures.empty();
  return report;
}

}  // namespace specfact
