#include "wcluster/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wcluster/error.hpp"

namespace wcluster {

namespace {

Json vector_to_json(const Vector& v) {
    Json arr = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        arr.push_back(v(i));
    }
    return arr;
}

double number_at(const Json& j, const char* what) {
    if (!j.is_number()) {
        throw Error(Errc::SchemaError, std::string(what) + " must contain numbers");
    }
    return j.get<double>();
}

void write_value(std::ostream& out, const Json& j, int indent, int depth) {
    const auto newline = [&](int level) {
        if (indent >= 0) {
            out << '\n' << std::string(static_cast<std::size_t>(indent * level), ' ');
        }
    };
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out << "{}";
                return;
            }
            out << '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out << ',';
                first = false;
                newline(depth + 1);
                out << Json(it.key()).dump() << (indent >= 0 ? ": " : ":");
                write_value(out, it.value(), indent, depth + 1);
            }
            newline(depth);
            out << '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out << "[]";
                return;
            }
            // Arrays of scalars stay on one line.
            const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
            out << '[';
            bool first = true;
            for (const auto& e : j) {
                if (!first) out << (flat && indent >= 0 ? ", " : ",");
                first = false;
                if (!flat) newline(depth + 1);
                write_value(out, e, indent, depth + 1);
            }
            if (!flat) newline(depth);
            out << ']';
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                out << "null";
                return;
            }
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << buf;
            return;
        }
        default:
            out << j.dump();
    }
}

}  // namespace

Json measure_to_json(const GaussianMeasure& measure, const std::string& label) {
    Json j = Json::object();
    if (!label.empty()) {
        j["label"] = label;
    }
    j["mean"] = vector_to_json(measure.mean());
    Json cov = Json::array();
    for (Eigen::Index r = 0; r < measure.dim(); ++r) {
        cov.push_back(vector_to_json(measure.cov().matrix().row(r).transpose()));
    }
    j["cov"] = std::move(cov);
    return j;
}

GaussianMeasure measure_from_json(const Json& j, std::optional<std::string>* label, double jitter) {
    if (!j.is_object()) {
        throw Error(Errc::SchemaError, "measure must be a JSON object");
    }
    if (!j.contains("mean") || !j["mean"].is_array() || j["mean"].empty()) {
        throw Error(Errc::SchemaError, "measure needs a non-empty \"mean\" array");
    }
    if (!j.contains("cov") || !j["cov"].is_array()) {
        throw Error(Errc::SchemaError, "measure needs a \"cov\" array of rows");
    }
    const auto& mean_j = j["mean"];
    const auto& cov_j = j["cov"];
    const auto d = static_cast<Eigen::Index>(mean_j.size());
    if (static_cast<Eigen::Index>(cov_j.size()) != d) {
        throw Error(Errc::SchemaError, "\"cov\" must have as many rows as \"mean\" has entries");
    }
    Vector mean(d);
    Matrix cov(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        mean(r) = number_at(mean_j[static_cast<std::size_t>(r)], "mean");
        const auto& row = cov_j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) {
            throw Error(Errc::SchemaError, "\"cov\" must be a square matrix");
        }
        for (Eigen::Index c = 0; c < d; ++c) {
            cov(r, c) = number_at(row[static_cast<std::size_t>(c)], "cov");
        }
    }
    if (j.contains("label") && !j["label"].is_string()) {
        throw Error(Errc::SchemaError, "\"label\" must be a string");
    }
    if (label != nullptr) {
        if (j.contains("label")) {
            *label = j["label"].get<std::string>();
        } else {
            label->reset();
        }
    }
    return GaussianMeasure(std::move(mean), ensure_spd(cov, jitter));
}

Json collection_to_json(const MeasureCollection& collection) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < collection.size(); ++i) {
        arr.push_back(measure_to_json(collection[i], collection.has_labels() ? collection.labels()[i] : ""));
    }
    return arr;
}

MeasureCollection collection_from_json(const Json& j, double jitter) {
    const Json items = j.is_array() ? j : Json::array({j});
    if (items.empty()) {
        throw Error(Errc::SchemaError, "measure file holds no measures");
    }
    std::vector<GaussianMeasure> measures;
    std::vector<std::optional<std::string>> raw_labels;
    bool any_label = false;
    for (const auto& item : items) {
        std::optional<std::string> label;
        measures.push_back(measure_from_json(item, &label, jitter));
        any_label = any_label || label.has_value();
        raw_labels.push_back(std::move(label));
    }
    std::vector<std::string> labels;
    if (any_label) {
        for (std::size_t i = 0; i < raw_labels.size(); ++i) {
            labels.push_back(raw_labels[i].value_or("m" + std::to_string(i)));
        }
    }
    return MeasureCollection(std::move(measures), std::move(labels));
}

Json cluster_report_to_json(const ClusterReport& report, const MeasureCollection& collection) {
    Json members = Json::array();
    for (const auto& r : report.records) {
        members.push_back(Json{{"label", collection.label(r.measure_index)},
                               {"tau", r.tau},
                               {"sigma", r.sigma},
                               {"sigma_tilde", r.sigma_tilde},
                               {"s", r.s},
                               {"tau_tilde_raw", r.tau_tilde_raw},
                               {"tau_tilde", r.tau_tilde}});
    }
    return Json{{"cluster", report.cluster_id},
                {"minimal", collection.label(report.minimal_index)},
                {"gci", report.gci},
                {"members", std::move(members)}};
}

Json compactness_to_json(const CompactnessReport& report, const MeasureCollection& collection) {
    Json clusters = Json::array();
    for (const auto& c : report.clusters) {
        clusters.push_back(cluster_report_to_json(c, collection));
    }
    return Json{{"gci_total", report.gci_total}, {"degenerate", report.degenerate}, {"clusters", std::move(clusters)}};
}

void write_json(std::ostream& out, const Json& j, int indent) {
    write_value(out, j, indent, 0);
    if (indent >= 0) {
        out << '\n';
    }
}

std::string dump_json(const Json& j, int indent) {
    std::ostringstream ss;
    write_json(ss, j, indent);
    return ss.str();
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::Io, "cannot open " + path);
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw Error(Errc::ParseError, path + ": " + e.what());
    }
}

}  // namespace wcluster
