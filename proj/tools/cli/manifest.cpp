#include "manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>

#include "wcluster/error.hpp"

namespace wcluster::cli {

std::string tool_version() { return WCLUSTER_VERSION; }

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::Io, "cannot open " + path);
    }
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw Error(Errc::Io, "SHA-256 unavailable");
    }
    std::array<char, 1 << 16> buf{};
    while (in.read(buf.data(), buf.size()) || in.gcount() > 0) {
        EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        char byte[3];
        std::snprintf(byte, sizeof byte, "%02x", digest[i]);
        hex += byte;
    }
    return hex;
}

Json RunManifest::to_json() const {
    Json j = Json::object();
    j["command"] = command;
    j["version"] = tool_version();
    j["config"] = config;
    Json digests = Json::array();
    for (const auto& path : inputs) {
        digests.push_back(Json{{"path", path}, {"sha256", sha256_file(path)}});
    }
    j["inputs"] = digests;
    if (!result.empty()) {
        j["result"] = result;
    }
    return j;
}

void RunManifest::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(Errc::Io, "cannot write " + path);
    }
    write_json(out, to_json());
    out << '\n';
}

}  // namespace wcluster::cli
