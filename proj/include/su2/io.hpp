#pragma once

// JSON and CSV serialization for coefficients, Wigner tables, generator
// configurations and Monte Carlo reports.

#include "su2/random_fields.hpp"
#include "su2/verify.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>

namespace su2 {

using Json = nlohmann::json;

/// {"band_limit_doubled": 2L, "blocks": [{"two_ell": n, "rows": [[[re, im], ...], ...]}]}
Json coefficients_to_json(const SpectralCoefficients& coeffs);
/// Throws InvalidSpec on shape errors.
SpectralCoefficients coefficients_from_json(const Json& j);

/// Rows two_ell,two_m,two_s,re,im.
void write_coefficients_csv(const SpectralCoefficients& coeffs, std::ostream& out);

Json wigner_table_json(const WignerMatrix& d);
void write_wigner_table_csv(const WignerMatrix& d, std::ostream& out);

Json grid_to_json(const QuadratureGrid& grid);

/// Generator configuration with optional run settings.
struct RunSpec {
  GeneratorConfig generator;
  std::optional<std::uint64_t> seed;
  std::optional<long> samples;
};

/// Keys: variant (gaussian_bi | gaussian_left | rotated | spin_measure),
/// band_limit_doubled, spectrum [sigma^2 by 2l], covariance [{two_ell, re, im}],
/// template (coefficient object), side (left | right | bi),
/// mu {two_ell, masses}, seed, samples. Throws InvalidSpec or NotPSD.
RunSpec run_spec_from_json(const Json& j);
/// Reads and parses a file. Throws InvalidSpec if unreadable or malformed.
RunSpec load_run_spec(const std::string& path);

Json report_to_json(const CorrelationReport& report);
void write_report_csv(const CorrelationReport& report, std::ostream& out);

Json spin_measures_to_json(const SpinMeasureSet& set);
Json spin_estimate_to_json(const SpinMeasureEstimate& estimate);
/// Rows mode,kind,two_ell,two_m,two_s,value,stderr with kind in
/// total|left|right|bi; unused indices are left empty. No header line.
void write_spin_estimate_csv(const SpinMeasureEstimate& estimate, const std::string& mode, std::ostream& out);

Json rows_to_json(const std::vector<CheckRow>& rows);

/// Decimal radians or a rational multiple of pi: "0.5", "pi", "-pi/2", "3pi/4",
/// "2*pi/3", with "π" accepted for "pi". Throws ParseError.
double parse_angle(const std::string& token);

}  // namespace su2
