#pragma once

#include <map>
#include <optional>
#include <string>

#include "specfact/factor_flip.hpp"

namespace specfact {

// Unit-circle sample angles theta_k = (2k + 1) pi / count, each nudged by a
// fixed shift while it lies within the dodge distance of a listed pole.
std::vector<double> sample_angles(const std::vector<Complex>& dodge_poles,
                                  int count);

// max_k || Phi_1(e^{i theta_k}) - Phi_2(e^{i theta_k}) ||_F over samples that
// dodge the poles of both models.  The caller compares against a tolerance.
double spectra_match(const StateSpaceModel& m1, const StateSpaceModel& m2,
                     int samples = tol::kSamples);

// max_k || Phi(e^{i theta_k}) ||_F; the natural scale for spectral gates.
double spectrum_scale(const StateSpaceModel& m, int samples = tol::kSamples);

// Greedy nearest matching between two eigenvalue multisets; returns the
// largest semi-relative pair distance, or infinity when sizes differ.
double eig_multiset_distance(const std::vector<Complex>& u,
                             const std::vector<Complex>& v);

bool same_pole_structure(const StateSpaceModel& m1, const StateSpaceModel& m2,
                         double tol = tol::kEigMatch);
bool same_zero_structure(const StateSpaceModel& m1, const StateSpaceModel& m2,
                         double tol = tol::kEigMatch);

// Consistency of the anchor solutions under a total pole flip: the zero-side
// anchor of the fully pole-flipped factor must equal Q_max + the reference
// zero-side anchor.  Returns the deviation norm; requires nonsingular A and
// nonsingular anchors (SingularA / SingularAnchor).
double check_lemma_nonsing(const ReferenceFamily& ref);

// max_k || W_1(e^{i theta_k}) - W_2(e^{i theta_k}) ||_F between the two
// composition orders of the same flip.
double check_diagram(const ReferenceFamily& ref, const FlipSpec& spec,
                     int samples = tol::kSamples);

struct FlipReport {
  double spectral_error = 0.0;
  std::map<std::string, double> riccati_residuals;
  std::vector<Complex> pole_multiset;
  std::vector<Complex> zero_multiset;
  std::optional<double> diagram_error;
  bool pass = false;
  std::vector<std::string> failures;

  // Carried for callers; not part of the serialized report.
  std::optional<StateSpaceModel> factor;
  std::optional<ErrorCode> computation_error;
};

// Runs the full flip for `spec`, collects every residual and comparison, and
// records failures instead of throwing (computation errors are captured in
// `failures` / `computation_error`).
FlipReport full_report(const ReferenceFamily& ref, const FlipSpec& spec,
                       bool include_diagram = true,
                       int samples = tol::kSamples);

}  // namespace specfact
