#pragma once

/**
 * @file sequence_registry.hpp
 * @brief OEIS sequences of central (2k+1)-nomial coefficients.
 *
 * Three sequences are registered: A002426 (k=1), A005191 (k=2) and
 * A025012 (k=3). Their built-in fixtures are generated from the
 * convolution route at build time. b-files can be fetched over HTTP and
 * are cached on disk as raw text plus a small JSON metadata file:
 *
 *   <cache>/A002426.txt        body exactly as served
 *   <cache>/A002426.meta.json  {"id", "fetched_at", "byte_length"}
 */

#include "multinom/circulant.hpp"
#include "multinom/generated/oeis_fixtures.hpp"
#include "multinom/multinomial_core.hpp"
#include "multinom/params.hpp"
#include "multinom/spectral.hpp"

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace multinom {

enum class Provenance { fixture, fetched, computed };

inline std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::fixture: return "fixture";
        case Provenance::fetched: return "fetched";
        case Provenance::computed: return "computed";
    }
    return "?";
}

struct SequenceRecord {
    std::string oeis_id;
    std::optional<std::int64_t> k;
    std::int64_t offset = 0;
    std::vector<BigInt> terms;
    Provenance provenance = Provenance::fixture;
    std::optional<std::chrono::system_clock::time_point> fetched_at;
    bool from_cache = false;  // fetched provenance served from the on-disk cache
};

class invalid_oeis_id : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class network_unavailable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class bfile_parse_error : public std::runtime_error {
public:
    bfile_parse_error(std::size_t line, std::string const& msg)
        : std::runtime_error("b-file line " + std::to_string(line) + ": " + msg), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// 'A' followed by exactly six digits.
inline bool is_valid_oeis_id(std::string_view id) {
    if (id.size() != 7 || id[0] != 'A') return false;
    for (char c : id.substr(1)) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

inline void require_valid_oeis_id(std::string_view id) {
    if (!is_valid_oeis_id(id)) {
        throw invalid_oeis_id("malformed OEIS id '" + std::string(id) + "', expected A followed by 6 digits");
    }
}

// ---------------------------------------------------------------------------
// Registered fixtures
// ---------------------------------------------------------------------------

inline SequenceRecord to_record(fixtures::FixtureSequence const& f) {
    SequenceRecord rec;
    rec.oeis_id = std::string(f.oeis_id);
    rec.k = f.k;
    rec.offset = f.offset;
    rec.provenance = Provenance::fixture;
    rec.terms.reserve(f.terms.size());
    for (auto t : f.terms) rec.terms.emplace_back(std::string(t));
    return rec;
}

inline std::vector<SequenceRecord> registered_sequences() {
    std::vector<SequenceRecord> out;
    for (auto const& f : fixtures::registered) out.push_back(to_record(f));
    return out;
}

inline std::optional<SequenceRecord> lookup_by_k(std::int64_t k) {
    for (auto const& f : fixtures::registered) {
        if (f.k == k) return to_record(f);
    }
    return std::nullopt;
}

inline std::optional<SequenceRecord> lookup_by_id(std::string_view id) {
    for (auto const& f : fixtures::registered) {
        if (f.oeis_id == id) return to_record(f);
    }
    return std::nullopt;
}

/// M^(2k,n) for n = offset .. offset+count-1 from the convolution route.
inline SequenceRecord computed_sequence(std::int64_t k, std::int64_t count, std::int64_t offset = 0) {
    SequenceRecord rec;
    if (auto reg = lookup_by_k(k)) rec.oeis_id = reg->oeis_id;
    rec.k = k;
    rec.offset = offset;
    rec.provenance = Provenance::computed;
    for (std::int64_t i = 0; i < count; ++i) rec.terms.push_back(central_coefficient({k, offset + i}));
    return rec;
}

// ---------------------------------------------------------------------------
// b-files
// ---------------------------------------------------------------------------

struct ParsedBFile {
    std::int64_t offset = 0;
    std::vector<BigInt> terms;
};

/// Parses "index value" lines, skipping blanks and '#' comments. Indices must be consecutive.
inline ParsedBFile parse_bfile(std::string_view text, std::size_t limit = SIZE_MAX) {
    ParsedBFile out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::int64_t> expected_index;
    while (std::getline(in, line) && out.terms.size() < limit) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto const first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;

        std::istringstream fields(line.substr(first));
        std::string index_str, value_str, extra;
        if (!(fields >> index_str >> value_str) || (fields >> extra)) {
            throw bfile_parse_error(line_no, "expected exactly two fields");
        }
        std::int64_t index = 0;
        try {
            std::size_t used = 0;
            index = std::stoll(index_str, &used);
            if (used != index_str.size()) throw std::invalid_argument(index_str);
        } catch (std::exception const&) {
            throw bfile_parse_error(line_no, "bad index '" + index_str + "'");
        }
        auto const digits = value_str.find_first_not_of('-') == 0 ? value_str : value_str.substr(1);
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
            throw bfile_parse_error(line_no, "bad value '" + value_str + "'");
        }
        if (expected_index && index != *expected_index) {
            throw bfile_parse_error(line_no, "index " + index_str + " does not follow " +
                                                 std::to_string(*expected_index - 1));
        }
        if (!expected_index) out.offset = index;
        expected_index = index + 1;
        out.terms.emplace_back(value_str);
    }
    return out;
}

struct FetchConfig {
    std::string base_url = "https://oeis.org";
    std::filesystem::path cache_dir;
    bool network_enabled = true;
    int timeout_seconds = 15;
};

/// $MULTINOM_CACHE_DIR, else $XDG_CACHE_HOME/multinom, else ~/.cache/multinom, else ./.multinom-cache.
inline std::filesystem::path default_cache_dir() {
    if (char const* dir = std::getenv("MULTINOM_CACHE_DIR"); dir && *dir) return dir;
    if (char const* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
        return std::filesystem::path(xdg) / "multinom";
    }
    if (char const* home = std::getenv("HOME"); home && *home) {
        return std::filesystem::path(home) / ".cache" / "multinom";
    }
    return ".multinom-cache";
}

/// "/A002426/b002426.txt"
inline std::string bfile_path(std::string_view id) {
    return "/" + std::string(id) + "/b" + std::string(id.substr(1)) + ".txt";
}

namespace detail {

inline std::mutex& cache_lock_for(std::string const& id) {
    static std::mutex table_guard;
    static std::map<std::string, std::unique_ptr<std::mutex>> locks;
    std::lock_guard g(table_guard);
    auto& slot = locks[id];
    if (!slot) slot = std::make_unique<std::mutex>();
    return *slot;
}

inline std::string format_utc(std::chrono::system_clock::time_point tp) {
    auto const t = std::chrono::system_clock::to_time_t(tp);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

inline std::optional<std::chrono::system_clock::time_point> parse_utc(std::string const& s) {
    std::tm tm{};
    std::istringstream is(s);
    is >> std::get_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    if (is.fail()) return std::nullopt;
    return std::chrono::system_clock::from_time_t(timegm(&tm));
}

inline void write_atomically(std::filesystem::path const& target, std::string const& body) {
    auto tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(body.data(), static_cast<std::streamsize>(body.size()));
        if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

struct CacheEntry {
    std::string body;
    std::optional<std::chrono::system_clock::time_point> fetched_at;
};

inline std::optional<CacheEntry> read_cache(std::filesystem::path const& dir, std::string const& id) {
    std::ifstream in(dir / (id + ".txt"), std::ios::binary);
    if (!in) return std::nullopt;
    CacheEntry e;
    e.body.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    std::ifstream meta(dir / (id + ".meta.json"));
    if (meta) {
        auto const j = nlohmann::json::parse(meta, nullptr, false);
        if (!j.is_discarded() && j.contains("fetched_at") && j["fetched_at"].is_string()) {
            e.fetched_at = parse_utc(j["fetched_at"].get<std::string>());
        }
    }
    return e;
}

inline void write_cache(std::filesystem::path const& dir, std::string const& id, std::string const& body,
                        std::chrono::system_clock::time_point fetched_at) {
    std::filesystem::create_directories(dir);
    write_atomically(dir / (id + ".txt"), body);
    nlohmann::json meta = {
        {"id", id}, {"fetched_at", format_utc(fetched_at)}, {"byte_length", body.size()}};
    write_atomically(dir / (id + ".meta.json"), meta.dump(2) + "\n");
}

inline SequenceRecord record_from_body(std::string const& id, std::string const& body, std::size_t limit) {
    auto parsed = parse_bfile(body, limit);
    SequenceRecord rec;
    rec.oeis_id = id;
    if (auto reg = lookup_by_id(id)) rec.k = reg->k;
    rec.offset = parsed.offset;
    rec.terms = std::move(parsed.terms);
    rec.provenance = Provenance::fetched;
    return rec;
}

}  // namespace detail

/// GETs the b-file for `id`, caches the raw body and returns up to `limit` terms.
/// Falls back to the cache on any network failure; throws network_unavailable with no cache.
inline SequenceRecord fetch_bfile(std::string const& id, std::size_t limit, FetchConfig const& config = {}) {
    require_valid_oeis_id(id);
    auto const cache_dir = config.cache_dir.empty() ? default_cache_dir() : config.cache_dir;
    std::lock_guard guard(detail::cache_lock_for(id));

    std::string failure = "network disabled by configuration";
    if (config.network_enabled) {
        httplib::Client client(config.base_url);
        client.set_connection_timeout(config.timeout_seconds, 0);
        client.set_read_timeout(config.timeout_seconds, 0);
        client.set_follow_location(true);
        if (auto res = client.Get(bfile_path(id))) {
            if (res->status == 200) {
                auto const now = std::chrono::system_clock::now();
                auto rec = detail::record_from_body(id, res->body, limit);
                if (rec.terms.empty()) throw bfile_parse_error(0, "no terms in b-file for " + id);
                detail::write_cache(cache_dir, id, res->body, now);
                rec.fetched_at = std::chrono::time_point_cast<std::chrono::seconds>(now);
                return rec;
            }
            failure = "HTTP status " + std::to_string(res->status);
        } else {
            failure = httplib::to_string(res.error());
        }
    }

    if (auto cached = detail::read_cache(cache_dir, id)) {
        auto rec = detail::record_from_body(id, cached->body, limit);
        rec.fetched_at = cached->fetched_at;
        rec.from_cache = true;
        return rec;
    }
    throw network_unavailable("cannot fetch " + id + " (" + failure + ") and no cache in " +
                              cache_dir.string());
}

// ---------------------------------------------------------------------------
// Comparison
// ---------------------------------------------------------------------------

struct ComparisonEntry {
    std::int64_t n = 0;
    BigInt expected;
    BigInt via_trace;
    BigInt via_spectrum;
    int escalations = 0;

    [[nodiscard]] bool equal() const { return expected == via_trace && expected == via_spectrum; }
};

struct ComparisonReport {
    std::string oeis_id;
    std::int64_t k = 0;
    std::vector<ComparisonEntry> entries;
    std::optional<std::int64_t> first_mismatch;  // n of the first unequal entry
    std::vector<std::string> paths{"trace", "spectral"};

    [[nodiscard]] bool all_equal() const { return !first_mismatch.has_value(); }
};

/// Recomputes the first `count` terms of `record` as M^(2k,n) by trace and by spectral sum.
inline ComparisonReport compare(SequenceRecord const& record, std::int64_t k, std::size_t count,
                                PrecisionPolicy const& policy = {}) {
    if (count > record.terms.size()) {
        throw std::out_of_range("requested " + std::to_string(count) + " terms but " +
                                record.oeis_id + " has " + std::to_string(record.terms.size()));
    }
    ComparisonReport report;
    report.oeis_id = record.oeis_id;
    report.k = k;
    for (std::size_t i = 0; i < count; ++i) {
        Params const p{k, record.offset + static_cast<std::int64_t>(i)};
        auto spectral = central_via_spectrum(p, policy);
        ComparisonEntry e{p.n, record.terms[i], central_via_trace(p), std::move(spectral.value),
                          spectral.escalations};
        if (!e.equal() && !report.first_mismatch) report.first_mismatch = e.n;
        report.entries.push_back(std::move(e));
    }
    return report;
}

}  // namespace multinom
