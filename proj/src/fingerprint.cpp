#include "mpx/fingerprint.hpp"

#include <stdexcept>

#include <openssl/evp.h>

namespace mpx {

Fingerprint fingerprint_bytes(const Bytes& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int digest_len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &digest_len, EVP_sha256(), nullptr) != 1 ||
        digest_len < 16) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    Fingerprint fp;
    for (size_t i = 0; i < fp.bytes.size(); ++i) fp.bytes[i] = digest[i];
    return fp;
}

std::string to_hex(const Fingerprint& fp) {
    return to_hex(Bytes(fp.bytes.begin(), fp.bytes.end()));
}

bool parse_fingerprint(const std::string& hex, Fingerprint& out) {
    std::optional<Bytes> bytes = from_hex(hex);
    if (!bytes || bytes->size() != out.bytes.size()) return false;
    for (size_t i = 0; i < out.bytes.size(); ++i) out.bytes[i] = (*bytes)[i];
    return true;
}

}  // namespace mpx
