#ifndef WCLUSTER_SERIALIZATION_HPP
#define WCLUSTER_SERIALIZATION_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "wcluster/compactness.hpp"
#include "wcluster/measure.hpp"

namespace wcluster {

using Json = nlohmann::ordered_json;

/// Jitter used by ensure_spd when covariances are loaded from JSON.
inline constexpr double kLoadJitter = 1e-8;

/// {"label": ..., "mean": [...], "cov": [[...]]}; the label key is omitted when empty.
Json measure_to_json(const GaussianMeasure& measure, const std::string& label = {});

/// Parses one measure; the covariance goes through ensure_spd. Throws
/// Error(SchemaError) on missing/ill-shaped fields.
GaussianMeasure measure_from_json(const Json& j, std::optional<std::string>* label = nullptr,
                                  double jitter = kLoadJitter);

Json collection_to_json(const MeasureCollection& collection);

/// Accepts a JSON array of measures, or a single measure object. Missing
/// labels are filled as "m<i>" only if at least one measure carries a label.
MeasureCollection collection_from_json(const Json& j, double jitter = kLoadJitter);

/// {"cluster", "minimal", "gci", "members": [{"label", "tau", "sigma",
/// "sigma_tilde", "s", "tau_tilde_raw", "tau_tilde"}]}
Json cluster_report_to_json(const ClusterReport& report, const MeasureCollection& collection);

/// {"gci_total", "degenerate", "clusters": [...]}
Json compactness_to_json(const CompactnessReport& report, const MeasureCollection& collection);

/// Writes JSON with every floating-point value at 17 significant digits.
void write_json(std::ostream& out, const Json& j, int indent = 2);
std::string dump_json(const Json& j, int indent = 2);

/// Reads and parses a JSON file; throws Error(Io) or Error(ParseError).
Json read_json_file(const std::string& path);

}  // namespace wcluster

#endif  // WCLUSTER_SERIALIZATION_HPP
