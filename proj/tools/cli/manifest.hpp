#ifndef WCLUSTER_CLI_MANIFEST_HPP
#define WCLUSTER_CLI_MANIFEST_HPP

#include <string>
#include <vector>

#include "wcluster/serialization.hpp"

namespace wcluster::cli {

/// Lowercase hex SHA-256 of a file's bytes; throws Error(Io).
std::string sha256_file(const std::string& path);

/// Reproducibility record written next to command outputs. Contains no
/// timestamps or host details so identical runs give identical bytes.
struct RunManifest {
    std::string command;
    Json config = Json::object();
    std::vector<std::string> inputs;
    Json result = Json::object();

    Json to_json() const;
    void write(const std::string& path) const;
};

std::string tool_version();

}  // namespace wcluster::cli

#endif  // WCLUSTER_CLI_MANIFEST_HPP
