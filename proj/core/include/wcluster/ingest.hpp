#ifndef WCLUSTER_INGEST_HPP
#define WCLUSTER_INGEST_HPP

#include <chrono>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wcluster/measure.hpp"

namespace wcluster {

using Date = std::chrono::year_month_day;

/// Strict ISO-8601 calendar date (YYYY-MM-DD); throws Error(ParseError).
Date parse_date(std::string_view text);
std::string format_date(const Date& date);

/// One row of panel data: an entity's observation vector at a date.
struct PanelRecord {
    std::string entity;
    Date date;
    Vector values;
    std::size_t line = 0;  ///< 1-based source line
};

struct PanelData {
    std::vector<std::string> variables;  ///< header names after entity,date
    std::vector<PanelRecord> records;    ///< sorted by date, file order within a date
    std::size_t dropped_missing = 0;     ///< rows with empty/NA fields
    std::size_t dropped_malformed = 0;   ///< rows skipped in lenient mode
};

enum class PanelFormat { Csv };

struct PanelLoadOptions {
    PanelFormat format = PanelFormat::Csv;
    /// Any missing or malformed row raises Error(ParseError) instead of being dropped.
    bool strict = false;
};

/**
 * Reads `entity,date,v1,...,vd` CSV panel data.
 *
 * The header must start with `entity,date` and name at least one variable;
 * otherwise Error(SchemaError). Parse failures carry the 1-based line number.
 */
PanelData load_panel(const std::string& path, const PanelLoadOptions& options = {});
PanelData parse_panel(std::istream& in, const PanelLoadOptions& options = {}, const std::string& source = "<input>");

/// Closed date interval [start, end].
struct PeriodSpec {
    std::string name;
    Date start;
    Date end;
};

/// Reads a `name,start,end` CSV; validates start <= end and non-overlap.
std::vector<PeriodSpec> load_periods(const std::string& path);
std::vector<PeriodSpec> parse_periods(std::istream& in, const std::string& source = "<input>");

/// Throws Error(OverlappingPeriods) if two periods share more than a single
/// boundary date, Error(SchemaError) for start > end or duplicate names.
void validate_periods(std::span<const PeriodSpec> specs);

struct PeriodBucket {
    PeriodSpec period;
    std::map<std::string, std::vector<PanelRecord>> entities;
};

struct PeriodSplit {
    std::vector<PeriodBucket> buckets;  ///< in the order the specs were given
    std::size_t dropped = 0;            ///< records outside every period
};

/// Places each record in its containing period; a date shared by two
/// touching periods goes to the earlier-starting one.
PeriodSplit split_periods(std::span<const PanelRecord> records, std::span<const PeriodSpec> specs);

enum class CovDenominator { NMinus1, N };

struct SummaryConfig {
    CovDenominator denominator = CovDenominator::NMinus1;
    /// Repair jitter, relative to the mean diagonal of the raw covariance.
    double jitter = 1e-8;
    /// Defaults to d + 1.
    std::optional<std::size_t> min_records;
};

struct RawSummary {
    Vector mean;
    Matrix cov;  ///< sample covariance before any repair
    std::size_t count = 0;
};

/// Componentwise mean and sample covariance; throws Error(TooFewRecords).
RawSummary summarize_raw(std::span<const PanelRecord> records, const SummaryConfig& config = {});

/// summarize_raw followed by ensure_spd with the scaled jitter.
GaussianMeasure summarize(std::span<const PanelRecord> records, const SummaryConfig& config = {});

struct PeriodMeasures {
    std::optional<MeasureCollection> measures;  ///< labeled by entity; empty if nobody qualified
    std::vector<std::string> skipped;           ///< entities with too few records
};

PeriodMeasures summarize_period(const PeriodBucket& bucket, const SummaryConfig& config = {});

}  // namespace wcluster

#endif  // WCLUSTER_INGEST_HPP
