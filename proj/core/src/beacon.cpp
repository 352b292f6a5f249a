#include "crucible/beacon.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace crucible::beacon {

const char* kDefaultApiUrl = "https://chain.api.btc.com/v3/block/latest";

Bytes combine_block(const BlockInfo& info) {
    if (!info.valid()) throw std::invalid_argument("combine_block: empty header or hash");
    const std::size_t n = std::min(info.header_bytes.size(), info.header_hash_bytes.size());
    Bytes out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = static_cast<std::uint8_t>(info.header_bytes[i] | info.header_hash_bytes[i]);
    }
    return out;
}

BeaconValue derive_beacon(const BlockInfo& info, const hashing::KeyedHash& hash) {
    BeaconValue value;
    value.digest = hash.digest(combine_block(info));
    value.digest_bits = hash.digest_bits();
    value.source_height = info.height;
    value.derived_at = std::chrono::system_clock::now();
    return value;
}

namespace {

// Locates the verbatim text of the top-level "data" object inside a JSON
// body: scans outside strings, tracks brace depth, and captures the
// balanced object that follows the key.
std::optional<std::string_view> find_data_object_text(std::string_view body) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    std::size_t string_start = 0;
    std::optional<std::string_view> pending_key;

    for (std::size_t i = 0; i < body.size(); ++i) {
        const char c = body[i];
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
                if (depth == 1) pending_key = body.substr(string_start, i - string_start);
            }
            continue;
        }
        switch (c) {
            case '"':
                in_string = true;
                string_start = i + 1;
                break;
            case '{':
            case '[':
                if (depth == 1 && c == '{' && pending_key == "data") {
                    // Capture the balanced object starting here.
                    int inner = 0;
                    bool istr = false;
                    bool iesc = false;
                    for (std::size_t j = i; j < body.size(); ++j) {
                        const char d = body[j];
                        if (istr) {
                            if (iesc) iesc = false;
                            else if (d == '\\') iesc = true;
                            else if (d == '"') istr = false;
                            continue;
                        }
                        if (d == '"') istr = true;
                        else if (d == '{') ++inner;
                        else if (d == '}') {
                            --inner;
                            if (inner == 0) return body.substr(i, j - i + 1);
                        }
                    }
                    return std::nullopt;  // unbalanced
                }
                ++depth;
                pending_key.reset();
                break;
            case '}':
            case ']':
                --depth;
                pending_key.reset();
                break;
            case ':':
            case ' ':
            case '\t':
            case '\n':
            case '\r':
                break;  // keep pending_key across "key" : {
            default:
                pending_key.reset();
                break;
        }
    }
    return std::nullopt;
}

}  // namespace

BlockInfo parse_api_response(std::string_view body, const std::string& source_name) {
    nlohmann::json doc = nlohmann::json::parse(body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw FetchError(FetchErrorKind::malformed, source_name, "response is not a JSON object");
    }
    if (!doc.contains("data") || !doc["data"].is_object()) {
        throw FetchError(FetchErrorKind::missing_field, source_name, "no \"data\" object");
    }
    const auto& data = doc["data"];
    if (!data.contains("hash") || !data["hash"].is_string()) {
        throw FetchError(FetchErrorKind::missing_field, source_name, "no \"hash\" field");
    }
    if (!data.contains("height") || !data["height"].is_number_integer()) {
        throw FetchError(FetchErrorKind::missing_field, source_name, "no \"height\" field");
    }

    auto hash_bytes = from_hex(data["hash"].get<std::string>());
    if (!hash_bytes || hash_bytes->empty()) {
        throw FetchError(FetchErrorKind::malformed, source_name, "\"hash\" is not hex");
    }

    auto data_text = find_data_object_text(body);
    if (!data_text) {
        throw FetchError(FetchErrorKind::malformed, source_name, "cannot locate data object text");
    }

    BlockInfo info;
    info.header_bytes = bytes_of(*data_text);
    info.header_hash_bytes = std::move(*hash_bytes);
    info.height = data["height"].get<std::int64_t>();
    info.fetched_at = std::chrono::system_clock::now();
    return info;
}

BlockInfo ScriptedSource::fetch_latest() {
    std::lock_guard lock(mutex_);
    ++fetches_;
    if (steps_.empty()) throw FetchError(FetchErrorKind::network, name(), "no scripted steps");
    const Step& step = steps_[next_];
    if (next_ + 1 < steps_.size()) ++next_;
    if (const auto* fail = std::get_if<Fail>(&step)) {
        throw FetchError(FetchErrorKind::network, name(), fail->reason);
    }
    return std::get<BlockInfo>(step);
}

BlockInfo FileSource::fetch_latest() {
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw FetchError(FetchErrorKind::network, name(), "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_api_response(buf.str(), name());
}

PollLoop::PollLoop(BeaconSource& source, const hashing::KeyedHash& hash, PollSchedule schedule,
                   BeaconSink sink, PollLogger logger)
    : source_(source),
      hash_(hash),
      schedule_(schedule),
      sink_(std::move(sink)),
      logger_(std::move(logger)) {}

PollLoop::~PollLoop() {
    stop();
}

void PollLoop::start() {
    if (thread_.joinable()) return;
    thread_ = std::jthread([this](std::stop_token st) { run(st); });
}

void PollLoop::stop() {
    if (!thread_.joinable()) return;
    thread_.request_stop();
    wait_cv_.notify_all();
    thread_.join();
    thread_ = std::jthread();
}

void PollLoop::wait_for(std::stop_token& st, std::chrono::milliseconds d) {
    if (d.count() <= 0) return;
    std::unique_lock lock(wait_mutex_);
    wait_cv_.wait_for(lock, st, d, [] { return false; });
}

void PollLoop::run(std::stop_token st) {
    std::optional<BlockInfo> last_block;
    std::optional<std::int64_t> last_emitted_height;

    while (!st.stop_requested()) {
        BlockInfo info;
        try {
            info = source_.fetch_latest();
        } catch (const std::exception& e) {
            fetch_errors_.fetch_add(1);
            if (logger_) logger_(std::string("beacon fetch failed: ") + e.what());
            wait_for(st, schedule_.short_wait);
            continue;
        }

        if (last_block && last_block->same_block(info)) {
            wait_for(st, schedule_.short_wait);
            continue;
        }
        if (last_emitted_height && info.height < *last_emitted_height) {
            ignored_regressions_.fetch_add(1);
            if (logger_) {
                logger_("beacon height regressed to " + std::to_string(info.height) +
                        ", ignoring");
            }
            wait_for(st, schedule_.short_wait);
            continue;
        }

        BeaconValue value = derive_beacon(info, hash_);
        sink_(value, info);
        emissions_.fetch_add(1);
        last_block = info;
        last_emitted_height = info.height;
        wait_for(st, schedule_.long_wait);
    }
}

}  // namespace crucible::beacon
