#pragma once

#include <json.hpp>

#include <iosfwd>
#include <string>

#include "thf/diagnostics.hpp"
#include "thf/forms.hpp"
#include "thf/laguerre.hpp"
#include "thf/measure.hpp"
#include "thf/spectra.hpp"

namespace thf::io {

inline constexpr int kSchemaVersion = 1;

/// Measure document:
///   {"support": "circle" | {"interval": [a, b]},
///    "density": {"trig_coeffs": [{"k":..,"re":..,"im":..}, ...]}
///             | {"poly_coeffs": [...], "alpha": a, "beta": b},
///    "atoms": [{"location": .., "mass": ..}, ...]}
/// Circle atom locations are angles in radians. Errors name the offending field.
Measure parse_measure(const nlohmann::json& doc);
Measure parse_measure_text(const std::string& text);
Measure load_measure(const std::string& path);
nlohmann::json measure_to_json(const Measure& m);

/// "n,re,im" rows for n in [-N_max, N_max] (Toeplitz) or "n,value" rows
/// (Hankel), preceded by a "# schema_version=1" line.
void write_coefficients_csv(std::ostream& out, const CoefficientSequence& c);
/// Errors carry the 1-based line number.
CoefficientSequence read_coefficients_csv(std::istream& in);
CoefficientSequence load_coefficients_csv(const std::string& path);

nlohmann::json to_json(const SpectralReport& r);
nlohmann::json to_json(const DiagnosticReport& r);
nlohmann::json to_json(const BridgeReport& r);

/// Fixed-width human-readable rendering of a diagnostic report.
std::string render_table(const DiagnosticReport& r);

/// Shortest round-trip decimal form of a double ("%.17g").
std::string format_double(double v);

}  // namespace thf::io
