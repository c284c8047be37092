#include "wcluster/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "wcluster/error.hpp"

namespace wcluster {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        s = s.substr(1, s.size() - 2);
    }
    return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            return fields;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

bool is_missing(std::string_view field) {
    if (field.empty()) return true;
    std::string lower(field);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    return lower == "na" || lower == "nan" || lower == "null" || lower == "n/a";
}

std::optional<double> parse_double(std::string_view field) {
    double v = 0.0;
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

[[noreturn]] void parse_fail(const std::string& source, std::size_t line, const std::string& msg) {
    throw Error(Errc::ParseError, source + ":" + std::to_string(line) + ": " + msg);
}

bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) {
            line.erase(0, 3);
        }
        if (!trim(line).empty()) {
            return true;
        }
    }
    return false;
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

}  // namespace

Date parse_date(std::string_view text) {
    text = trim(text);
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    const bool shape = text.size() == 10 && text[4] == '-' && text[7] == '-';
    const auto read = [&](std::size_t pos, std::size_t len, auto& out) {
        const auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
        return ec == std::errc{} && ptr == text.data() + pos + len;
    };
    if (!shape || !read(0, 4, y) || !read(5, 2, m) || !read(8, 2, d)) {
        throw Error(Errc::ParseError, "invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
    }
    const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!date.ok()) {
        throw Error(Errc::ParseError, "invalid calendar date '" + std::string(text) + "'");
    }
    return date;
}

std::string format_date(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

PanelData load_panel(const std::string& path, const PanelLoadOptions& options) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::Io, "cannot open " + path);
    }
    return parse_panel(in, options, path);
}

PanelData parse_panel(std::istream& in, const PanelLoadOptions& options, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    if (!next_content_line(in, line, line_no)) {
        throw Error(Errc::SchemaError, source + ": missing header row");
    }
    const auto header = split_csv(line);
    if (header.size() < 3 || lowercase(header[0]) != "entity" || lowercase(header[1]) != "date") {
        throw Error(Errc::SchemaError, source + ": header must be entity,date,v1,...,vd");
    }

    PanelData data;
    for (std::size_t c = 2; c < header.size(); ++c) {
        data.variables.emplace_back(header[c]);
    }
    const std::size_t width = header.size();

    while (next_content_line(in, line, line_no)) {
        const auto fields = split_csv(line);
        auto reject = [&](bool missing, const std::string& msg) {
            if (options.strict) {
                parse_fail(source, line_no, msg);
            }
            ++(missing ? data.dropped_missing : data.dropped_malformed);
        };
        if (fields.size() != width) {
            reject(false, "expected " + std::to_string(width) + " fields, found " + std::to_string(fields.size()));
            continue;
        }
        if (fields[0].empty()) {
            reject(false, "empty entity");
            continue;
        }
        Date date;
        try {
            date = parse_date(fields[1]);
        } catch (const Error& e) {
            reject(false, e.what());
            continue;
        }
        Vector values(static_cast<Eigen::Index>(width - 2));
        bool missing = false;
        bool malformed = false;
        std::string bad;
        for (std::size_t c = 2; c < width; ++c) {
            if (is_missing(fields[c])) {
                missing = true;
                continue;
            }
            if (auto v = parse_double(fields[c])) {
                values(static_cast<Eigen::Index>(c - 2)) = *v;
            } else {
                malformed = true;
                bad = std::string(fields[c]);
            }
        }
        if (malformed) {
            reject(false, "unparseable value '" + bad + "'");
            continue;
        }
        if (missing) {
            reject(true, "missing value");
            continue;
        }
        data.records.push_back(PanelRecord{std::string(fields[0]), date, std::move(values), line_no});
    }

    std::stable_sort(data.records.begin(), data.records.end(),
                     [](const PanelRecord& a, const PanelRecord& b) { return a.date < b.date; });
    return data;
}

std::vector<PeriodSpec> load_periods(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::Io, "cannot open " + path);
    }
    return parse_periods(in, path);
}

std::vector<PeriodSpec> parse_periods(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    if (!next_content_line(in, line, line_no)) {
        throw Error(Errc::SchemaError, source + ": missing header row");
    }
    const auto header = split_csv(line);
    if (header.size() != 3 || lowercase(header[0]) != "name" || lowercase(header[1]) != "start" ||
        lowercase(header[2]) != "end") {
        throw Error(Errc::SchemaError, source + ": header must be name,start,end");
    }
    std::vector<PeriodSpec> specs;
    while (next_content_line(in, line, line_no)) {
        const auto fields = split_csv(line);
        if (fields.size() != 3 || fields[0].empty()) {
            parse_fail(source, line_no, "expected name,start,end");
        }
        try {
            specs.push_back(PeriodSpec{std::string(fields[0]), parse_date(fields[1]), parse_date(fields[2])});
        } catch (const Error& e) {
            parse_fail(source, line_no, e.what());
        }
    }
    validate_periods(specs);
    return specs;
}

void validate_periods(std::span<const PeriodSpec> specs) {
    std::set<std::string> names;
    for (const auto& p : specs) {
        if (p.end < p.start) {
            throw Error(Errc::SchemaError, "period " + p.name + " ends before it starts");
        }
        if (!names.insert(p.name).second) {
            throw Error(Errc::SchemaError, "duplicate period name " + p.name);
        }
    }
    std::vector<const PeriodSpec*> sorted;
    for (const auto& p : specs) sorted.push_back(&p);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const PeriodSpec* a, const PeriodSpec* b) { return a->start < b->start; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i]->start < sorted[i - 1]->end) {
            throw Error(Errc::OverlappingPeriods, "periods " + sorted[i - 1]->name + " and " + sorted[i]->name +
                                                      " overlap");
        }
    }
}

PeriodSplit split_periods(std::span<const PanelRecord> records, std::span<const PeriodSpec> specs) {
    validate_periods(specs);
    std::vector<std::size_t> by_start(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) by_start[i] = i;
    std::stable_sort(by_start.begin(), by_start.end(),
                     [&](std::size_t a, std::size_t b) { return specs[a].start < specs[b].start; });

    PeriodSplit split;
    for (const auto& spec : specs) {
        split.buckets.push_back(PeriodBucket{spec, {}});
    }
    for (const auto& rec : records) {
        bool placed = false;
        for (auto i : by_start) {
            if (specs[i].start <= rec.date && rec.date <= specs[i].end) {
                split.buckets[i].entities[rec.entity].push_back(rec);
                placed = true;
                break;
            }
        }
        if (!placed) {
            ++split.dropped;
        }
    }
    return split;
}

RawSummary summarize_raw(std::span<const PanelRecord> records, const SummaryConfig& config) {
    if (records.empty()) {
        throw Error(Errc::TooFewRecords, "no records to summarize");
    }
    const auto d = records.front().values.size();
    const std::size_t n = records.size();
    const std::size_t needed = std::max<std::size_t>(config.min_records.value_or(static_cast<std::size_t>(d) + 1),
                                                     config.denominator == CovDenominator::NMinus1 ? 2 : 1);
    if (n < needed) {
        throw Error(Errc::TooFewRecords, "need at least " + std::to_string(needed) + " records for entity " +
                                             records.front().entity + ", got " + std::to_string(n));
    }

    RawSummary out;
    out.count = n;
    out.mean = Vector::Zero(d);
    for (const auto& r : records) {
        if (r.values.size() != d) {
            throw Error(Errc::DimMismatch, "records have differing lengths");
        }
        out.mean += r.values;
    }
    out.mean /= static_cast<double>(n);

    out.cov = Matrix::Zero(d, d);
    for (const auto& r : records) {
        const Vector centered = r.values - out.mean;
        out.cov.noalias() += centered * centered.transpose();
    }
    const double denom = static_cast<double>(config.denominator == CovDenominator::NMinus1 ? n - 1 : n);
    out.cov /= denom;
    return out;
}

GaussianMeasure summarize(std::span<const PanelRecord> records, const SummaryConfig& config) {
    if (!(config.jitter > 0.0)) {
        throw Error(Errc::InvalidArgument, "jitter must be positive");
    }
    RawSummary raw = summarize_raw(records, config);
    const double mean_diag = raw.cov.diagonal().mean();
    const double scale = mean_diag > 0.0 ? mean_diag : 1.0;
    return GaussianMeasure(std::move(raw.mean), ensure_spd(raw.cov, config.jitter * scale));
}

PeriodMeasures summarize_period(const PeriodBucket& bucket, const SummaryConfig& config) {
    PeriodMeasures out;
    std::vector<GaussianMeasure> measures;
    std::vector<std::string> labels;
    for (const auto& [entity, records] : bucket.entities) {
        try {
            measures.push_back(summarize(records, config));
            labels.push_back(entity);
        } catch (const Error& e) {
            if (e.code() != Errc::TooFewRecords) {
                throw;
            }
            out.skipped.push_back(entity);
        }
    }
    if (!measures.empty()) {
        out.measures.emplace(std::move(measures), std::move(labels));
    }
    return out;
}

}  // namespace wcluster
