#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <ostream>

#include "cli.hpp"
#include "ghostgrover/error.hpp"

namespace ghostgrover::cli {

std::string sha256_hex(const std::string& bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int k = 0; k < len; ++k) {
        out.push_back(kHex[digest[k] >> 4]);
        out.push_back(kHex[digest[k] & 0xf]);
    }
    return out;
}

RunContext::RunContext(std::filesystem::path out_dir, bool quiet, std::ostream& out, std::ostream& err)
    : out_dir_(std::move(out_dir)), quiet_(quiet), out_(out), err_(err) {}

std::filesystem::path RunContext::resolve(const std::string& relative) const { return out_dir_ / relative; }

void RunContext::write_file(const std::string& relative, const std::string& bytes) {
    const auto path = resolve(relative);
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.close();
    if (!f) throw IoError("failed writing '" + path.string() + "'");
    // Rewriting a file replaces its record.
    std::erase_if(files_, [&](const FileRecord& r) { return r.path == relative; });
    files_.push_back({relative, bytes.size(), sha256_hex(bytes)});
}

void RunContext::note(const std::string& message) {
    if (!quiet_) err_ << message << '\n';
}

}  // namespace ghostgrover::cli
