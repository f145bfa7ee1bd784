#pragma once

#include <vector>

namespace crashrepro::harness {

/// Vargha-Delaney effect size: the probability that a value drawn from
/// sample a is smaller than one drawn from sample b, counting ties as half.
/// Computed from midranks; equals brute-force pair counting exactly.
double vargha_delaney_a12(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace crashrepro::harness
