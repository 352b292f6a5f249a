#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <fstream>

#include "crucible/beacon.hpp"

namespace crucible::beacon {

namespace {

struct ParsedUrl {
    bool https = false;
    std::string host;
    int port = 0;
    std::string path;
};

ParsedUrl parse_url(const std::string& url, const std::string& source_name) {
    ParsedUrl out;
    std::string rest;
    if (url.starts_with("https://")) {
        out.https = true;
        rest = url.substr(8);
    } else if (url.starts_with("http://")) {
        out.https = false;
        rest = url.substr(7);
    } else {
        throw FetchError(FetchErrorKind::network, source_name, "unsupported URL scheme");
    }
    const std::size_t slash = rest.find('/');
    std::string authority = slash == std::string::npos ? rest : rest.substr(0, slash);
    out.path = slash == std::string::npos ? "/" : rest.substr(slash);
    const std::size_t colon = authority.find(':');
    if (colon == std::string::npos) {
        out.host = authority;
        out.port = out.https ? 443 : 80;
    } else {
        out.host = authority.substr(0, colon);
        out.port = std::stoi(authority.substr(colon + 1));
    }
    if (out.host.empty()) throw FetchError(FetchErrorKind::network, source_name, "empty host");
    return out;
}

}  // namespace

BlockInfo HttpSource::fetch_latest() {
    const ParsedUrl url = parse_url(url_, name());
    auto fetch_with = [&](auto& client) -> std::string {
        client.set_connection_timeout(timeout_.count(), 0);
        client.set_read_timeout(timeout_.count(), 0);
        client.set_follow_location(true);
        auto res = client.Get(url.path);
        if (!res) {
            throw FetchError(FetchErrorKind::network, name(),
                             "request failed: " + httplib::to_string(res.error()));
        }
        if (res->status != 200) {
            throw FetchError(FetchErrorKind::network, name(),
                             "HTTP status " + std::to_string(res->status));
        }
        return res->body;
    };

    std::string body;
    if (url.https) {
        httplib::SSLClient client(url.host, url.port);
        if (std::ifstream("/etc/ssl/certs/ca-certificates.crt").good()) {
            client.set_ca_cert_path("/etc/ssl/certs/ca-certificates.crt");
        }
        body = fetch_with(client);
    } else {
        httplib::Client client(url.host, url.port);
        body = fetch_with(client);
    }
    return parse_api_response(body, name());
}

}  // namespace crucible::beacon
