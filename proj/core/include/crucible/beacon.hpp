#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "crucible/bigint.hpp"
#include "crucible/bytes.hpp"
#include "crucible/hashing.hpp"

namespace crucible::beacon {

/// Raw block metadata from a beacon source. header_bytes is the verbatim
/// JSON text of the API's "data" object; header_hash_bytes is the decoded
/// block-header hash.
struct BlockInfo {
    Bytes header_bytes;
    Bytes header_hash_bytes;
    std::int64_t height = 0;
    std::chrono::system_clock::time_point fetched_at{};

    bool valid() const { return !header_bytes.empty() && !header_hash_bytes.empty(); }
    bool same_block(const BlockInfo& other) const {
        return header_bytes == other.header_bytes && header_hash_bytes == other.header_hash_bytes;
    }
};

struct BeaconValue {
    BigInt digest;
    unsigned digest_bits = 0;
    std::int64_t source_height = 0;
    std::chrono::system_clock::time_point derived_at{};

    std::string hex() const { return to_hex_fixed(digest, digest_bits / 4); }
};

enum class FetchErrorKind { network, malformed, missing_field };

class FetchError : public std::runtime_error {
public:
    FetchError(FetchErrorKind kind, std::string source, const std::string& detail)
        : std::runtime_error("beacon fetch from " + source + ": " + detail),
          kind_(kind),
          source_(std::move(source)) {}

    FetchErrorKind kind() const { return kind_; }
    const std::string& source() const { return source_; }

private:
    FetchErrorKind kind_;
    std::string source_;
};

class BeaconSource {
public:
    virtual ~BeaconSource() = default;
    virtual BlockInfo fetch_latest() = 0;
    virtual std::string name() const = 0;
};

/// Bytewise OR of header and header hash, truncated to the shorter input.
Bytes combine_block(const BlockInfo& info);

/// Keyed digest of the combined block bytes. Pure in (block bytes, key).
BeaconValue derive_beacon(const BlockInfo& info, const hashing::KeyedHash& hash);

/// Parses a raw API response body: JSON with a top-level "data" object
/// holding at least "hash" (hex string) and "height" (integer).
/// header_bytes is the data object's verbatim text from the body, so the
/// digest never depends on re-serialization choices.
BlockInfo parse_api_response(std::string_view body, const std::string& source_name);

/// Always returns the same block.
class FixedSource final : public BeaconSource {
public:
    explicit FixedSource(BlockInfo info) : info_(std::move(info)) {}
    BlockInfo fetch_latest() override {
        ++fetches_;
        return info_;
    }
    std::string name() const override { return "fixed"; }
    int fetches() const { return fetches_; }

private:
    BlockInfo info_;
    std::atomic<int> fetches_{0};
};

/// Plays a fixed sequence of blocks or injected errors, then repeats the
/// final entry. Thread-safe; fetches() lets tests observe progress.
class ScriptedSource final : public BeaconSource {
public:
    struct Fail {
        std::string reason;
    };
    using Step = std::variant<BlockInfo, Fail>;

    explicit ScriptedSource(std::vector<Step> steps) : steps_(std::move(steps)) {}
    BlockInfo fetch_latest() override;
    std::string name() const override { return "scripted"; }
    int fetches() const { return fetches_.load(); }

private:
    std::vector<Step> steps_;
    std::atomic<int> fetches_{0};
    std::mutex mutex_;
    std::size_t next_ = 0;
};

/// Replays a saved API response body from disk.
class FileSource final : public BeaconSource {
public:
    explicit FileSource(std::string path) : path_(std::move(path)) {}
    BlockInfo fetch_latest() override;
    std::string name() const override { return "file:" + path_; }

private:
    std::string path_;
};

/// Live HTTPS/HTTP API source; one GET per fetch.
class HttpSource final : public BeaconSource {
public:
    explicit HttpSource(std::string url, std::chrono::seconds timeout = std::chrono::seconds{10})
        : url_(std::move(url)), timeout_(timeout) {}
    BlockInfo fetch_latest() override;
    std::string name() const override { return url_; }

private:
    std::string url_;
    std::chrono::seconds timeout_;
};

extern const char* kDefaultApiUrl;

struct PollSchedule {
    std::chrono::milliseconds long_wait{240'000};  // after a new block
    std::chrono::milliseconds short_wait{30'000};  // unchanged or error
};

using BeaconSink = std::function<void(const BeaconValue&, const BlockInfo&)>;
using PollLogger = std::function<void(std::string_view)>;

/// Fetches in a dedicated thread and delivers one BeaconValue per distinct
/// consecutive block, in order. Fetch errors are counted and retried on the
/// short wait; the loop only exits via stop(). A block with a height below
/// the last emitted one is ignored (and counted) rather than emitted.
class PollLoop {
public:
    PollLoop(BeaconSource& source, const hashing::KeyedHash& hash, PollSchedule schedule,
             BeaconSink sink, PollLogger logger = nullptr);
    ~PollLoop();

    void start();
    void stop();
    bool running() const { return thread_.joinable(); }

    std::uint64_t emissions() const { return emissions_.load(); }
    std::uint64_t fetch_errors() const { return fetch_errors_.load(); }
    std::uint64_t ignored_regressions() const { return ignored_regressions_.load(); }

private:
    void run(std::stop_token st);
    void wait_for(std::stop_token& st, std::chrono::milliseconds d);

    BeaconSource& source_;
    const hashing::KeyedHash& hash_;
    PollSchedule schedule_;
    BeaconSink sink_;
    PollLogger logger_;
    std::jthread thread_;
    std::mutex wait_mutex_;
    std::condition_variable_any wait_cv_;
    std::atomic<std::uint64_t> emissions_{0};
    std::atomic<std::uint64_t> fetch_errors_{0};
    std::atomic<std::uint64_t> ignored_regressions_{0};
};

}  // namespace crucible::beacon
