#include "app.hpp"

#include <CLI11.hpp>

#include <algorithm>

#include "commands.hpp"
#include "manifest.hpp"
#include "wcluster/error.hpp"

namespace wcluster::cli {

namespace {

int exit_code_for(Errc code) {
    switch (code) {
        case Errc::KTooLarge:
        case Errc::InvalidArgument:
        case Errc::OutOfRange:
        case Errc::SizeMismatch:
            return kConfigError;
        case Errc::NumericalBreakdown:
        case Errc::IllConditioned:
        case Errc::MaxIterExceeded:
        case Errc::EmptyCluster:
            return kNumericalError;
        case Errc::NotSpd:
        case Errc::NonFinite:
        case Errc::DimMismatch:
        case Errc::ParseError:
        case Errc::SchemaError:
        case Errc::TooFewRecords:
        case Errc::OverlappingPeriods:
        case Errc::Io:
            return kInputError;
    }
    return kInputError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Wasserstein K-means clustering of Gaussian measures with geodesic compactness diagnostics",
                 "wcluster"};
    app.set_version_flag("--version", tool_version());
    app.require_subcommand(1);

    IngestOptions ingest;
    auto* ingest_cmd = app.add_subcommand("ingest", "Summarize panel data into one Gaussian measure per entity and period");
    ingest_cmd->add_option("--input", ingest.input, "Panel CSV (entity,date,v1,...,vd)")->required();
    ingest_cmd->add_option("--periods", ingest.periods, "Period CSV (name,start,end)")->required();
    ingest_cmd->add_option("--out", ingest.out_dir, "Output directory")->required();
    ingest_cmd->add_option("--cov-denominator", ingest.cov_denominator, "Covariance denominator")
        ->check(CLI::IsMember({"n-1", "n"}))
        ->capture_default_str();
    ingest_cmd->add_option("--jitter", ingest.jitter, "Repair jitter relative to the mean variance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    ingest_cmd->add_flag("--strict", ingest.strict, "Fail on any missing or malformed row");

    ClusterOptions cluster;
    auto* cluster_cmd = app.add_subcommand("cluster", "Run Wasserstein K-means");
    cluster_cmd->add_option("--measures", cluster.measures, "Measures JSON")->required();
    cluster_cmd->add_option("--k", cluster.k, "Number of clusters")->required()->check(CLI::PositiveNumber);
    cluster_cmd->add_option("--init", cluster.init, "Initial centers")
        ->check(CLI::IsMember({"random", "farthest"}))
        ->capture_default_str();
    cluster_cmd->add_option("--seed", cluster.seed, "Random seed")->capture_default_str();
    cluster_cmd->add_option("--restarts", cluster.restarts, "Independent restarts")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cluster_cmd->add_option("--max-iter", cluster.max_iter, "Lloyd iteration cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cluster_cmd->add_flag("--reports", cluster.reports, "Compute compactness reports");
    cluster_cmd->add_option("--out", cluster.out_dir, "Output directory")->required();

    GciScanOptions scan;
    auto* scan_cmd = app.add_subcommand("gci-scan", "Total and per-cluster GCI for a range of K");
    scan_cmd->add_option("--measures", scan.measures, "Measures JSON")->required();
    scan_cmd->add_option("--kmin", scan.kmin, "Smallest K")->required()->check(CLI::PositiveNumber);
    scan_cmd->add_option("--kmax", scan.kmax, "Largest K")->required()->check(CLI::PositiveNumber);
    scan_cmd->add_option("--init", scan.init, "Initial centers")
        ->check(CLI::IsMember({"random", "farthest"}))
        ->capture_default_str();
    scan_cmd->add_option("--seed", scan.seed, "Random seed shared by every K")->capture_default_str();
    scan_cmd->add_option("--restarts", scan.restarts, "Independent restarts per K")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    scan_cmd->add_flag("--suggest-k", scan.suggest_k, "Report the smallest K within 0.02 of the best GCI");
    scan_cmd->add_option("--out", scan.out, "Output CSV")->required();

    DistanceOptions distance;
    auto* distance_cmd = app.add_subcommand("distance", "W2 distance between two measures");
    distance_cmd->add_option("--a", distance.a, "First measure JSON")->required();
    distance_cmd->add_option("--b", distance.b, "Second measure JSON")->required();
    distance_cmd->add_flag("--bures", distance.bures, "Ignore locations (Bures-Wasserstein)");

    BarycenterOptions bary;
    auto* bary_cmd = app.add_subcommand("barycenter", "Weighted Wasserstein barycenter");
    bary_cmd->add_option("--measures", bary.measures, "Measures JSON")->required();
    bary_cmd->add_option("--weights", bary.weights, "Comma-separated weights summing to 1");
    bary_cmd->add_option("--out", bary.out, "Output JSON")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::CallForVersion&) {
        out << tool_version() << '\n';
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        if (*ingest_cmd) {
            cmd_ingest(ingest, out, err);
        } else if (*cluster_cmd) {
            cmd_cluster(cluster, out, err);
        } else if (*scan_cmd) {
            cmd_gci_scan(scan, out, err);
        } else if (*distance_cmd) {
            cmd_distance(distance, out, err);
        } else if (*bary_cmd) {
            cmd_barycenter(bary, out, err);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kSuccess;
}

}  // namespace wcluster::cli
