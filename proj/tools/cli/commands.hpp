#ifndef WCLUSTER_CLI_COMMANDS_HPP
#define WCLUSTER_CLI_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace wcluster::cli {

struct IngestOptions {
    std::string input;
    std::string periods;
    std::string out_dir;
    std::string cov_denominator = "n-1";
    double jitter = 1e-8;
    bool strict = false;
};

struct ClusterOptions {
    std::string measures;
    std::size_t k = 2;
    std::string init = "random";
    std::uint64_t seed = 0;
    int restarts = 1;
    int max_iter = 100;
    bool reports = false;
    std::string out_dir;
};

struct GciScanOptions {
    std::string measures;
    std::size_t kmin = 1;
    std::size_t kmax = 2;
    std::string init = "random";
    std::uint64_t seed = 0;
    int restarts = 1;
    bool suggest_k = false;
    std::string out;
};

struct DistanceOptions {
    std::string a;
    std::string b;
    bool bures = false;
};

struct BarycenterOptions {
    std::string measures;
    std::string weights;
    std::string out;
};

// Each command throws wcluster::Error on failure; run() maps codes to exit statuses.
void cmd_ingest(const IngestOptions& opts, std::ostream& out, std::ostream& err);
void cmd_cluster(const ClusterOptions& opts, std::ostream& out, std::ostream& err);
void cmd_gci_scan(const GciScanOptions& opts, std::ostream& out, std::ostream& err);
void cmd_distance(const DistanceOptions& opts, std::ostream& out, std::ostream& err);
void cmd_barycenter(const BarycenterOptions& opts, std::ostream& out, std::ostream& err);

/// Smallest K whose total GCI is within `slack` of the scan maximum.
std::size_t suggest_k(const std::vector<std::size_t>& ks, const std::vector<double>& gci, double slack = 0.02);

}  // namespace wcluster::cli

#endif  // WCLUSTER_CLI_COMMANDS_HPP
