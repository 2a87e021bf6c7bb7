#pragma once

#include <string>
#include <vector>

#include "sg/model.hpp"

namespace sg {

enum class VerifyLevel { Quick, Full };

struct VerifyCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  /// "<" checks value < tolerance; "in" checks lo <= value <= tolerance.
  std::string comparison = "<";
  double lower = 0.0;
  bool passed = false;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  /// L2 distance between the exact and the sigma_t ~ sigma0 packet at delta_t;
  /// always reported.
  double approximation_error = 0.0;

  bool all_passed() const;
};

/// Quick: split-operator oracle at delta_t on 2048 points for both spin
/// components, continuity at two times. Full: adds the 4096-point oracle,
/// the dt-halving convergence ratio, norm and first-moment tracking, the free
/// packet check and continuity at six times for three polarizations.
VerifyReport run_verification(const Setup& setup, VerifyLevel level);

std::string format_report(const VerifyReport& report);

} // namespace sg
