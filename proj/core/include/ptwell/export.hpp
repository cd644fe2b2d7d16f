#pragma once

#include <string>

#include "ptwell/constraints.hpp"
#include "ptwell/oracle.hpp"
#include "ptwell/spectrum.hpp"

namespace ptwell {

/// Significant digits for CSV and table output: 17 unless PTWELL_PRECISION
/// holds an integer in [1, 17].
int output_precision();

/// printf("%.*g") with the given number of significant digits.
std::string format_number(double value, int precision = 17);

/// {"K", "L", "orbits": [[[row, col], ...], ...], "labels": [...]}, 1-based positions.
std::string pattern_to_json(const CouplingPattern& pattern);
/// Inverse of pattern_to_json; orbits are re-canonicalized. Throws InvalidInput.
CouplingPattern pattern_from_json(const std::string& text);
/// K x K grid of orbit labels.
std::string pattern_to_table(const CouplingPattern& pattern);

/// Header `n,oval,s,t,z_eff,E,degeneracy`, one row per root, n 1-based.
std::string spectrum_to_csv(const Spectrum& spectrum, int precision = 17);
std::string spectrum_to_json(const Spectrum& spectrum);
std::string spectrum_to_table(const Spectrum& spectrum, int precision = 17);

/// {"K", "N", "n_levels", "max_rel_error", "convergence_ratio"?, "residuals": {...}}.
std::string validation_to_json(const ValidationReport& report);

}  // namespace ptwell
