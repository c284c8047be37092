#include "commands.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "manifest.hpp"
#include "wcluster/barycenter.hpp"
#include "wcluster/clustering.hpp"
#include "wcluster/error.hpp"
#include "wcluster/ingest.hpp"
#include "wcluster/parallel.hpp"
#include "wcluster/serialization.hpp"

namespace wcluster::cli {

namespace fs = std::filesystem;

namespace {

std::string fixed5(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.5f", v);
    return buf;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw Error(Errc::Io, "cannot create directory " + dir);
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error(Errc::Io, "cannot write " + path);
    }
    return f;
}

void write_json_file(const std::string& path, const Json& j) {
    auto f = open_out(path);
    write_json(f, j);
    f << '\n';
}

MeasureCollection load_measures(const std::string& path) { return collection_from_json(read_json_file(path)); }

GaussianMeasure load_single(const std::string& path) {
    const MeasureCollection c = load_measures(path);
    if (c.size() != 1) {
        throw Error(Errc::SchemaError, path + ": expected exactly one measure, found " + std::to_string(c.size()));
    }
    return c[0];
}

InitStrategy parse_init(const std::string& name) {
    if (name == "random") return InitStrategy::RandomMembers;
    if (name == "farthest") return InitStrategy::FarthestFirst;
    throw Error(Errc::InvalidArgument, "unknown init strategy '" + name + "'");
}

// Filenames for period outputs keep letters, digits, '-', '_' and '.'.
std::string safe_name(const std::string& name) {
    std::string s = name;
    for (char& c : s) {
        const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
        if (!ok) c = '_';
    }
    return s;
}

std::vector<double> parse_weights(const std::string& text) {
    std::vector<double> w;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
        if (used == 0 || used != item.size()) {
            throw Error(Errc::InvalidArgument, "bad weight '" + item + "'");
        }
        w.push_back(v);
    }
    return w;
}

}  // namespace

void cmd_ingest(const IngestOptions& opts, std::ostream& out, std::ostream& err) {
    SummaryConfig summary;
    if (opts.cov_denominator == "n-1") {
        summary.denominator = CovDenominator::NMinus1;
    } else if (opts.cov_denominator == "n") {
        summary.denominator = CovDenominator::N;
    } else {
        throw Error(Errc::InvalidArgument, "--cov-denominator must be 'n-1' or 'n'");
    }
    if (!(opts.jitter > 0.0)) {
        throw Error(Errc::InvalidArgument, "--jitter must be positive");
    }
    summary.jitter = opts.jitter;

    PanelLoadOptions load;
    load.strict = opts.strict;
    const PanelData panel = load_panel(opts.input, load);
    const std::vector<PeriodSpec> specs = load_periods(opts.periods);
    const PeriodSplit split = split_periods(panel.records, specs);

    if (panel.dropped_missing + panel.dropped_malformed > 0) {
        err << "warning: dropped " << panel.dropped_missing << " rows with missing values and "
            << panel.dropped_malformed << " malformed rows\n";
    }
    if (split.dropped > 0) {
        err << "warning: " << split.dropped << " records fall outside every period\n";
    }

    ensure_dir(opts.out_dir);
    Json written = Json::array();
    for (const PeriodBucket& bucket : split.buckets) {
        const PeriodMeasures pm = summarize_period(bucket, summary);
        for (const auto& name : pm.skipped) {
            err << "warning: period " << bucket.period.name << ": entity " << name << " has too few records\n";
        }
        Json entry = Json::object();
        entry["period"] = bucket.period.name;
        entry["skipped"] = pm.skipped;
        if (!pm.measures) {
            err << "warning: period " << bucket.period.name << " has no qualifying entities\n";
            entry["file"] = nullptr;
            written.push_back(entry);
            continue;
        }
        const std::string file = safe_name(bucket.period.name) + ".json";
        write_json_file((fs::path(opts.out_dir) / file).string(), collection_to_json(*pm.measures));
        out << bucket.period.name << ": " << pm.measures->size() << " measures -> " << file << '\n';
        entry["file"] = file;
        entry["measures"] = pm.measures->size();
        written.push_back(entry);
    }

    RunManifest manifest;
    manifest.command = "ingest";
    manifest.config = Json{{"cov_denominator", opts.cov_denominator},
                           {"jitter", opts.jitter},
                           {"strict", opts.strict},
                           {"min_records", "d+1"}};
    manifest.inputs = {opts.input, opts.periods};
    manifest.result = Json{{"records", panel.records.size()},
                           {"dropped_missing", panel.dropped_missing},
                           {"dropped_malformed", panel.dropped_malformed},
                           {"dropped_out_of_period", split.dropped},
                           {"periods", written}};
    manifest.write((fs::path(opts.out_dir) / "manifest.json").string());
}

void cmd_cluster(const ClusterOptions& opts, std::ostream& out, std::ostream& err) {
    const MeasureCollection coll = load_measures(opts.measures);
    ClusteringConfig cfg;
    cfg.k = opts.k;
    cfg.init = parse_init(opts.init);
    cfg.seed = opts.seed;
    cfg.restarts = opts.restarts;
    cfg.max_iter = opts.max_iter;
    cfg.reports = opts.reports;
    const ClusteringResult r = kmeans(coll, cfg);

    ensure_dir(opts.out_dir);
    const fs::path dir(opts.out_dir);
    {
        auto csv = open_out((dir / "assignments.csv").string());
        csv << (r.reports ? "label,cluster,tau,sigma,sigma_tilde,s,tau_tilde\n" : "label,cluster\n");
        std::vector<const RegistrationRecord*> by_member(coll.size(), nullptr);
        if (r.reports) {
            for (const auto& c : r.reports->clusters)
                for (const auto& rec : c.records) by_member[rec.measure_index] = &rec;
        }
        for (std::size_t i = 0; i < coll.size(); ++i) {
            csv << coll.label(i) << ',' << r.assignments[i];
            if (const RegistrationRecord* rec = by_member[i]) {
                csv << ',' << fixed5(rec->tau) << ',' << fixed5(rec->sigma) << ',' << fixed5(rec->sigma_tilde) << ','
                    << fixed5(rec->s) << ',' << fixed5(rec->tau_tilde);
            }
            csv << '\n';
        }
    }
    {
        std::vector<std::string> labels;
        for (std::size_t c = 0; c < r.centers.size(); ++c) labels.push_back("c" + std::to_string(c));
        write_json_file((dir / "centers.json").string(), collection_to_json(MeasureCollection(r.centers, labels)));
    }
    if (r.reports) {
        write_json_file((dir / "reports.json").string(), compactness_to_json(*r.reports, coll));
    }
    if (r.barycenter_warnings > 0) {
        err << "warning: " << r.barycenter_warnings << " barycenter solves hit their iteration cap\n";
    }
    if (!r.converged) {
        err << "warning: K-means stopped at max_iter without converging\n";
    }

    RunManifest manifest;
    manifest.command = "cluster";
    manifest.config = Json{{"k", opts.k},         {"init", opts.init},
                           {"seed", opts.seed},   {"restarts", opts.restarts},
                           {"max_iter", opts.max_iter}, {"center_tol", cfg.center_tol},
                           {"reports", opts.reports},   {"barycenter_tol", cfg.barycenter.tol},
                           {"barycenter_max_iter", cfg.barycenter.max_iter},
                           {"registration_grid", cfg.registration.grid_points},
                           {"registration_t_tol", cfg.registration.t_tol}};
    manifest.inputs = {opts.measures};
    manifest.result = Json{{"inertia", r.inertia},
                           {"iterations", r.iterations},
                           {"converged", r.converged},
                           {"barycenter_warnings", r.barycenter_warnings},
                           {"global_barycenter", measure_to_json(r.global_barycenter)}};
    if (r.reports) {
        manifest.result["gci_total"] = r.reports->gci_total;
    }
    manifest.write((dir / "manifest.json").string());

    out << "k=" << opts.k << " inertia=" << fixed5(r.inertia) << " iterations=" << r.iterations;
    if (r.reports) out << " gci=" << fixed5(r.reports->gci_total);
    out << '\n';
}

std::size_t suggest_k(const std::vector<std::size_t>& ks, const std::vector<double>& gci, double slack) {
    const double best = *std::max_element(gci.begin(), gci.end());
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (gci[i] >= best - slack) return ks[i];
    }
    return ks.back();
}

void cmd_gci_scan(const GciScanOptions& opts, std::ostream& out, std::ostream& err) {
    const MeasureCollection coll = load_measures(opts.measures);
    if (opts.kmin < 1 || opts.kmin > opts.kmax) {
        throw Error(Errc::InvalidArgument, "need 1 <= kmin <= kmax");
    }
    if (opts.kmax > coll.size()) {
        throw Error(Errc::KTooLarge,
                    "kmax " + std::to_string(opts.kmax) + " exceeds " + std::to_string(coll.size()) + " measures");
    }
    const InitStrategy init = parse_init(opts.init);
    const std::size_t count = opts.kmax - opts.kmin + 1;
    std::vector<std::optional<ClusteringResult>> results(count);
    // The same seed is used for every K so curves are comparable across runs.
    parallel_for(count, [&](std::size_t j) {
        ClusteringConfig cfg;
        cfg.k = opts.kmin + j;
        cfg.init = init;
        cfg.seed = opts.seed;
        cfg.restarts = opts.restarts;
        cfg.reports = true;
        results[j] = kmeans(coll, cfg);
    });

    auto csv = open_out(opts.out);
    csv << "K,gci_total";
    for (std::size_t c = 1; c <= opts.kmax; ++c) csv << ",gci_" << c;
    csv << '\n';
    std::vector<std::size_t> ks;
    std::vector<double> totals;
    Json rows = Json::array();
    for (std::size_t j = 0; j < count; ++j) {
        const std::size_t k = opts.kmin + j;
        const CompactnessReport& rep = *results[j]->reports;
        csv << k << ',' << fixed5(rep.gci_total);
        for (std::size_t c = 1; c <= opts.kmax; ++c) {
            csv << ',';
            if (c <= k) csv << fixed5(rep.clusters[c - 1].gci);
        }
        csv << '\n';
        ks.push_back(k);
        totals.push_back(rep.gci_total);
        if (rep.degenerate) {
            err << "note: K=" << k << " has a degenerate cluster geodesic (local equals global barycenter)\n";
        }
        rows.push_back(Json{{"k", k},
                            {"gci_total", rep.gci_total},
                            {"degenerate", rep.degenerate},
                            {"inertia", results[j]->inertia}});
    }

    RunManifest manifest;
    manifest.command = "gci-scan";
    manifest.config = Json{{"kmin", opts.kmin}, {"kmax", opts.kmax},         {"init", opts.init},
                           {"seed", opts.seed}, {"restarts", opts.restarts}, {"suggest_k", opts.suggest_k}};
    manifest.inputs = {opts.measures};
    manifest.result = Json{{"scan", rows}};
    if (opts.suggest_k) {
        const std::size_t k = suggest_k(ks, totals);
        manifest.result["suggested_k"] = k;
        manifest.result["suggestion_rule"] = "smallest K with gci_total within 0.02 of the scan maximum";
        out << "suggested K: " << k << '\n';
    }
    manifest.write(opts.out + ".manifest.json");
}

void cmd_distance(const DistanceOptions& opts, std::ostream& out, std::ostream&) {
    const GaussianMeasure a = load_single(opts.a);
    const GaussianMeasure b = load_single(opts.b);
    const double d = opts.bures ? bures_distance(a.cov(), b.cov()) : w2_distance(a, b);
    out << fixed5(d) << '\n';
}

void cmd_barycenter(const BarycenterOptions& opts, std::ostream& out, std::ostream& err) {
    const MeasureCollection coll = load_measures(opts.measures);
    const WeightVector w = opts.weights.empty() ? WeightVector::uniform(coll.size())
                                                : WeightVector(parse_weights(opts.weights));
    if (w.size() != coll.size()) {
        throw Error(Errc::SizeMismatch, std::to_string(w.size()) + " weights for " + std::to_string(coll.size()) +
                                            " measures");
    }
    const BarycenterConfig cfg;
    const BarycenterResult r = wasserstein_barycenter(coll, w, cfg);
    if (!r.converged) {
        err << "warning: barycenter iteration hit max_iter; residual " << r.residual << '\n';
    }
    write_json_file(opts.out, measure_to_json(r.barycenter, "barycenter"));

    RunManifest manifest;
    manifest.command = "barycenter";
    manifest.config = Json{{"weights", w.values()}, {"tol", cfg.tol}, {"max_iter", cfg.max_iter}};
    manifest.inputs = {opts.measures};
    manifest.result = Json{{"iterations", r.iterations}, {"residual", r.residual}, {"converged", r.converged}};
    manifest.write(opts.out + ".manifest.json");
    out << "barycenter of " << coll.size() << " measures -> " << opts.out << '\n';
}

}  // namespace wcluster::cli
