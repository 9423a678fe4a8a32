#include "sweep/corpus.hpp"

#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "sweep/error.hpp"

namespace sweep::corpus {

using json = nlohmann::json;

// ============================================================================
// Normalization
// ============================================================================

namespace {

bool starts_with_ci(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i]) return false;
    }
    return true;
}

std::string_view lower_into(std::string_view s, char* buf) {
    for (std::size_t i = 0; i < s.size(); ++i)
        buf[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[i])));
    return {buf, s.size()};
}

}  // namespace

std::string_view normalize_into(derivation::ChainId chain, std::string_view text, char* buf) {
    if (text.empty()) raise(Error::Code::EmptyInput, "empty address");
    switch (chain) {
        case derivation::ChainId::BCH: {
            if (starts_with_ci(text, "bitcoincash:")) text.remove_prefix(12);
            return lower_into(text, buf);
        }
        case derivation::ChainId::ETH: {
            if (starts_with_ci(text, "0x")) text.remove_prefix(2);
            buf[0] = '0';
            buf[1] = 'x';
            lower_into(text, buf + 2);
            return {buf, text.size() + 2};
        }
        case derivation::ChainId::BTC:
            if (starts_with_ci(text, "bc1")) return lower_into(text, buf);
            return text;
        case derivation::ChainId::LTC:
            if (starts_with_ci(text, "ltc1")) return lower_into(text, buf);
            return text;
        default:
            return text;  // Base58 chains are case-significant
    }
}

std::string normalize(derivation::ChainId chain, std::string_view text) {
    std::vector<char> buf(text.size() + 2);
    return std::string(normalize_into(chain, text, buf.data()));
}

// ============================================================================
// Ingestion
// ============================================================================

IngestStats ingest_file(const std::string& path, derivation::ChainId chain, const RecordSink& sink) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Error::Code::FileUnreadable, "cannot open corpus dump: " + path);
    IngestStats stats;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::string_view field(line);
        if (auto tab = field.find('\t'); tab != std::string_view::npos) field = field.substr(0, tab);
        bool ok = !field.empty();
        for (char c : field) {
            if (static_cast<unsigned char>(c) < 0x21 || static_cast<unsigned char>(c) > 0x7E) {
                ok = false;
                break;
            }
        }
        if (!ok) {
            ++stats.malformed;
            continue;
        }
        sink(RawAddressRecord{chain, std::string(field)});
        ++stats.records;
    }
    return stats;
}

std::string FileBlockSource::fetch(std::uint64_t height) {
    std::string path = dir_ + "/" + std::to_string(height) + ".json";
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SourceError(height, "cannot open block document: " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

namespace {

void collect_addresses(const json& node, std::vector<std::string>& out) {
    if (auto it = node.find("address"); it != node.end() && it->is_string()) {
        out.push_back(it->get<std::string>());
        return;
    }
    if (auto it = node.find("addresses"); it != node.end() && it->is_array()) {
        for (const auto& a : *it) {
            if (a.is_string()) out.push_back(a.get<std::string>());
        }
    }
}

const json* find_array(const json& node, std::initializer_list<const char*> keys) {
    for (const char* key : keys) {
        if (auto it = node.find(key); it != node.end() && it->is_array()) return &*it;
    }
    return nullptr;
}

}  // namespace

IngestStats ingest_blocks(BlockSource& source, derivation::ChainId chain, std::uint64_t first,
                          std::uint64_t last, const RecordSink& sink) {
    IngestStats stats;
    for (std::uint64_t h = first; h <= last; ++h) {
        std::string doc = source.fetch(h);
        json block;
        try {
            block = json::parse(doc);
        } catch (const std::exception& e) {
            throw SourceError(h, "block document parse failure: " + std::string(e.what()));
        }
        const json* txs = find_array(block, {"tx", "transactions"});
        if (!txs) throw SourceError(h, "block document has no transaction array");
        for (const auto& tx : *txs) {
            const json* outputs = find_array(tx, {"vout", "outputs"});
            if (!outputs) continue;
            for (const auto& output : *outputs) {
                std::vector<std::string> found;
                for (const char* key : {"scriptPubKey", "script"}) {
                    if (auto it = output.find(key); it != output.end() && it->is_object())
                        collect_addresses(*it, found);
                }
                if (found.empty()) collect_addresses(output, found);
                if (found.empty()) {
                    ++stats.outputs_without_address;  // nonstandard script
                    continue;
                }
                for (auto& a : found) {
                    sink(RawAddressRecord{chain, std::move(a)});
                    ++stats.records;
                }
            }
        }
        stats.last_height = h;
        if (h == last) break;  // avoid wrap at UINT64_MAX
    }
    return stats;
}

// ============================================================================
// Bloom prefilter (Murmur3 x64-128 double hashing)
// ============================================================================

namespace {

inline std::uint64_t rotl64(std::uint64_t x, int r) { return (x << r) | (x >> (64 - r)); }

inline std::uint64_t fmix64(std::uint64_t k) {
    k ^= k >> 33;
    k *= 0xFF51AFD7ED558CCDULL;
    k ^= k >> 33;
    k *= 0xC4CEB9FE1A85EC53ULL;
    k ^= k >> 33;
    return k;
}

void murmur3_x64_128(const void* key, std::size_t len, std::uint32_t seed, std::uint64_t out[2]) {
    const auto* data = static_cast<const std::uint8_t*>(key);
    const std::size_t nblocks = len / 16;
    std::uint64_t h1 = seed, h2 = seed;
    constexpr std::uint64_t c1 = 0x87C37B91114253D5ULL;
    constexpr std::uint64_t c2 = 0x4CF5AD432745937FULL;

    for (std::size_t i = 0; i < nblocks; ++i) {
        std::uint64_t k1, k2;
        std::memcpy(&k1, data + 16 * i, 8);
        std::memcpy(&k2, data + 16 * i + 8, 8);
        k1 *= c1;
        k1 = rotl64(k1, 31);
        k1 *= c2;
        h1 ^= k1;
        h1 = rotl64(h1, 27);
        h1 += h2;
        h1 = h1 * 5 + 0x52DCE729;
        k2 *= c2;
        k2 = rotl64(k2, 33);
        k2 *= c1;
        h2 ^= k2;
        h2 = rotl64(h2, 31);
        h2 += h1;
        h2 = h2 * 5 + 0x38495AB5;
    }

    const std::uint8_t* tail = data + nblocks * 16;
    std::uint64_t k1 = 0, k2 = 0;
    switch (len & 15) {
        case 15: k2 ^= static_cast<std::uint64_t>(tail[14]) << 48; [[fallthrough]];
        case 14: k2 ^= static_cast<std::uint64_t>(tail[13]) << 40; [[fallthrough]];
        case 13: k2 ^= static_cast<std::uint64_t>(tail[12]) << 32; [[fallthrough]];
        case 12: k2 ^= static_cast<std::uint64_t>(tail[11]) << 24; [[fallthrough]];
        case 11: k2 ^= static_cast<std::uint64_t>(tail[10]) << 16; [[fallthrough]];
        case 10: k2 ^= static_cast<std::uint64_t>(tail[9]) << 8; [[fallthrough]];
        case 9:
            k2 ^= static_cast<std::uint64_t>(tail[8]);
            k2 *= c2;
            k2 = rotl64(k2, 33);
            k2 *= c1;
            h2 ^= k2;
            [[fallthrough]];
        case 8: k1 ^= static_cast<std::uint64_t>(tail[7]) << 56; [[fallthrough]];
        case 7: k1 ^= static_cast<std::uint64_t>(tail[6]) << 48; [[fallthrough]];
        case 6: k1 ^= static_cast<std::uint64_t>(tail[5]) << 40; [[fallthrough]];
        case 5: k1 ^= static_cast<std::uint64_t>(tail[4]) << 32; [[fallthrough]];
        case 4: k1 ^= static_cast<std::uint64_t>(tail[3]) << 24; [[fallthrough]];
        case 3: k1 ^= static_cast<std::uint64_t>(tail[2]) << 16; [[fallthrough]];
        case 2: k1 ^= static_cast<std::uint64_t>(tail[1]) << 8; [[fallthrough]];
        case 1:
            k1 ^= static_cast<std::uint64_t>(tail[0]);
            k1 *= c1;
            k1 = rotl64(k1, 31);
            k1 *= c2;
            h1 ^= k1;
            break;
        default: break;
    }

    h1 ^= static_cast<std::uint64_t>(len);
    h2 ^= static_cast<std::uint64_t>(len);
    h1 += h2;
    h2 += h1;
    h1 = fmix64(h1);
    h2 = fmix64(h2);
    h1 += h2;
    h2 += h1;
    out[0] = h1;
    out[1] = h2;
}

constexpr std::uint32_t kBloomSeed = 0x9747B28C;

}  // namespace

BloomFilter::BloomFilter(std::uint64_t n, double fp_rate) {
    const double ln2 = 0.6931471805599453;
    double bits = n == 0 ? 64.0 : std::ceil(static_cast<double>(n) * -std::log(fp_rate) / (ln2 * ln2));
    num_bits_ = std::max<std::uint64_t>(64, static_cast<std::uint64_t>(bits));
    double k = n == 0 ? 1.0 : std::round(static_cast<double>(num_bits_) / static_cast<double>(n) * ln2);
    num_hashes_ = static_cast<std::uint32_t>(std::clamp(k, 1.0, 30.0));
    words_.assign((num_bits_ + 63) / 64, 0);
}

BloomFilter BloomFilter::from_parts(std::uint64_t num_bits, std::uint32_t num_hashes,
                                    std::vector<std::uint64_t> words) {
    BloomFilter f;
    f.num_bits_ = num_bits;
    f.num_hashes_ = num_hashes;
    f.words_ = std::move(words);
    return f;
}

void BloomFilter::insert(std::string_view key) {
    std::uint64_t h[2];
    murmur3_x64_128(key.data(), key.size(), kBloomSeed, h);
    std::uint64_t h2 = h[1] | 1;
    for (std::uint32_t i = 0; i < num_hashes_; ++i) {
        std::uint64_t bit = (h[0] + i * h2) % num_bits_;
        words_[bit >> 6] |= 1ULL << (bit & 63);
    }
}

bool BloomFilter::maybe_contains(std::string_view key) const {
    if (num_bits_ == 0) return false;
    std::uint64_t h[2];
    murmur3_x64_128(key.data(), key.size(), kBloomSeed, h);
    std::uint64_t h2 = h[1] | 1;
    for (std::uint32_t i = 0; i < num_hashes_; ++i) {
        std::uint64_t bit = (h[0] + i * h2) % num_bits_;
        if (!(words_[bit >> 6] & 1ULL << (bit & 63))) return false;
    }
    return true;
}

// ============================================================================
// Index files
// ============================================================================

namespace {

constexpr std::uint8_t kFormatVersion = 1;

void put_u16(std::string& out, std::uint16_t v) {
    for (int i = 0; i < 2; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}
void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}
void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}
void put_f64(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(out, bits);
}

std::uint64_t get_u64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = v << 8 | p[i];
    return v;
}
std::uint32_t get_u32(const std::uint8_t* p) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = v << 8 | p[i];
    return v;
}

void write_file(const std::string& path, const std::string& head, const void* body,
                std::size_t body_len) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) raise(Error::Code::FileUnreadable, "cannot create " + path);
    bool ok = std::fwrite(head.data(), 1, head.size(), f) == head.size();
    if (ok && body_len) ok = std::fwrite(body, 1, body_len, f) == body_len;
    ok = std::fclose(f) == 0 && ok;
    if (!ok) raise(Error::Code::DiskFull, "short write to " + path);
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Error::Code::FileUnreadable, "cannot open " + path);
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>());
}

}  // namespace

CorpusIndex::CorpusIndex(CorpusIndex&& other) noexcept { *this = std::move(other); }

CorpusIndex& CorpusIndex::operator=(CorpusIndex&& other) noexcept {
    if (this != &other) {
        if (map_) ::munmap(map_, map_size_);
        chain_ = other.chain_;
        count_ = other.count_;
        fp_rate_ = other.fp_rate_;
        filter_ = std::move(other.filter_);
        map_ = other.map_;
        map_size_ = other.map_size_;
        offsets_ = other.offsets_;
        blob_ = other.blob_;
        other.map_ = nullptr;
        other.map_size_ = 0;
        other.offsets_ = nullptr;
        other.blob_ = nullptr;
    }
    return *this;
}

CorpusIndex::~CorpusIndex() {
    if (map_) ::munmap(map_, map_size_);
}

CorpusIndex CorpusIndex::load(const std::string& base_path) {
    CorpusIndex idx;

    auto meta = read_file(base_path + ".meta");
    if (meta.size() != 24 || std::memcmp(meta.data(), "SWPM", 4) != 0 || meta[4] != kFormatVersion)
        raise(Error::Code::ConfigError, "bad index meta file: " + base_path + ".meta");
    idx.chain_ = static_cast<derivation::ChainId>(meta[5]);
    idx.count_ = get_u64(meta.data() + 8);
    std::uint64_t rate_bits = get_u64(meta.data() + 16);
    std::memcpy(&idx.fp_rate_, &rate_bits, 8);

    auto filt = read_file(base_path + ".filter");
    if (filt.size() < 24 || std::memcmp(filt.data(), "SWPF", 4) != 0 || filt[4] != kFormatVersion)
        raise(Error::Code::ConfigError, "bad index filter file: " + base_path + ".filter");
    std::uint64_t num_bits = get_u64(filt.data() + 8);
    std::uint32_t num_hashes = get_u32(filt.data() + 16);
    std::size_t nwords = (num_bits + 63) / 64;
    if (filt.size() != 24 + 8 * nwords)
        raise(Error::Code::ConfigError, "filter file size mismatch: " + base_path + ".filter");
    std::vector<std::uint64_t> words(nwords);
    for (std::size_t i = 0; i < nwords; ++i) words[i] = get_u64(filt.data() + 24 + 8 * i);
    idx.filter_ = BloomFilter::from_parts(num_bits, num_hashes, std::move(words));

    std::string sorted_path = base_path + ".sorted";
    int fd = ::open(sorted_path.c_str(), O_RDONLY);
    if (fd < 0) raise(Error::Code::FileUnreadable, "cannot open " + sorted_path);
    struct stat st{};
    if (::fstat(fd, &st) != 0) {
        ::close(fd);
        raise(Error::Code::FileUnreadable, "cannot stat " + sorted_path);
    }
    idx.map_size_ = static_cast<std::size_t>(st.st_size);
    idx.map_ = ::mmap(nullptr, idx.map_size_, PROT_READ, MAP_PRIVATE, fd, 0);
    ::close(fd);
    if (idx.map_ == MAP_FAILED) {
        idx.map_ = nullptr;
        raise(Error::Code::FileUnreadable, "cannot map " + sorted_path);
    }
    const auto* base = static_cast<const std::uint8_t*>(idx.map_);
    if (idx.map_size_ < 24 || std::memcmp(base, "SWPS", 4) != 0 || base[4] != kFormatVersion)
        raise(Error::Code::ConfigError, "bad index sorted file: " + sorted_path);
    std::uint64_t count = get_u64(base + 8);
    std::uint64_t blob_size = get_u64(base + 16);
    if (count != idx.count_)
        raise(Error::Code::ConfigError, "meta/sorted count mismatch: " + base_path);
    if (idx.map_size_ != 24 + 8 * (count + 1) + blob_size)
        raise(Error::Code::ConfigError, "sorted file size mismatch: " + sorted_path);
    idx.offsets_ = reinterpret_cast<const std::uint64_t*>(base + 24);
    idx.blob_ = reinterpret_cast<const char*>(base + 24 + 8 * (count + 1));
    return idx;
}

std::string_view CorpusIndex::entry(std::uint64_t i) const {
    return {blob_ + offsets_[i], static_cast<std::size_t>(offsets_[i + 1] - offsets_[i])};
}

bool CorpusIndex::exact_contains(std::string_view key) const {
    std::uint64_t lo = 0, hi = count_;
    while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (entry(mid) < key)
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo < count_ && entry(lo) == key;
}

bool CorpusIndex::prefilter_maybe_contains(std::string_view key) const {
    return filter_.maybe_contains(key);
}

bool CorpusIndex::contains(std::string_view key) const {
    if (count_ == 0) return false;
    if (!filter_.maybe_contains(key)) return false;
    return exact_contains(key);
}

void IndexBuilder::add(std::string_view raw_text) {
    entries_.push_back(normalize(chain_, raw_text));
}

CorpusIndex IndexBuilder::build(double fp_rate, const std::string& base_path) {
    if (!(fp_rate >= 1e-9 && fp_rate <= 0.1))
        raise(Error::Code::OutOfRange, "fp_rate must be in [1e-9, 0.1]");

    std::sort(entries_.begin(), entries_.end());
    entries_.erase(std::unique(entries_.begin(), entries_.end()), entries_.end());
    const std::uint64_t count = entries_.size();

    BloomFilter filter(count, fp_rate);
    for (const auto& e : entries_) filter.insert(e);

    // .sorted: header, offsets, blob
    std::string head;
    head.reserve(24 + 8 * (count + 1));
    head += "SWPS";
    head.push_back(static_cast<char>(kFormatVersion));
    head.append(3, '\0');
    put_u64(head, count);
    std::uint64_t blob_size = 0;
    for (const auto& e : entries_) blob_size += e.size();
    put_u64(head, blob_size);
    std::uint64_t off = 0;
    for (const auto& e : entries_) {
        put_u64(head, off);
        off += e.size();
    }
    put_u64(head, off);
    std::string blob;
    blob.reserve(blob_size);
    for (const auto& e : entries_) blob += e;
    write_file(base_path + ".sorted", head, blob.data(), blob.size());

    // .filter
    std::string fhead;
    fhead += "SWPF";
    fhead.push_back(static_cast<char>(kFormatVersion));
    fhead.append(3, '\0');
    put_u64(fhead, filter.num_bits());
    put_u32(fhead, filter.num_hashes());
    put_u32(fhead, 0);
    std::string fbody;
    fbody.reserve(filter.words().size() * 8);
    for (std::uint64_t w : filter.words()) put_u64(fbody, w);
    write_file(base_path + ".filter", fhead, fbody.data(), fbody.size());

    // .meta last; its presence marks a complete index
    std::string mhead;
    mhead += "SWPM";
    mhead.push_back(static_cast<char>(kFormatVersion));
    mhead.push_back(static_cast<char>(chain_));
    put_u16(mhead, 0);
    put_u64(mhead, count);
    put_f64(mhead, fp_rate);
    write_file(base_path + ".meta", mhead, nullptr, 0);

    entries_.clear();
    entries_.shrink_to_fit();
    return CorpusIndex::load(base_path);
}

// ============================================================================
// HTTP block source (plain http; endpoints and tokens are configuration)
// ============================================================================

struct HttpBlockSource::Impl {
    std::string host_base;     // scheme://host[:port]
    std::string path_prefix;   // may contain {height}
    std::string token;
    unsigned pacing_ms = 0;
    bool first = true;
    std::unique_ptr<void, void (*)(void*)> client{nullptr, [](void*) {}};
};

}  // namespace sweep::corpus

// httplib pulls in a lot; keep it out of the header and the namespace.
#include <httplib.h>

namespace sweep::corpus {

HttpBlockSource::HttpBlockSource(std::string url, std::string token, unsigned pacing_ms)
    : impl_(std::make_unique<Impl>()) {
    auto scheme_end = url.find("://");
    std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    auto path_start = url.find('/', host_start);
    if (path_start == std::string::npos) {
        impl_->host_base = url;
    } else {
        impl_->host_base = url.substr(0, path_start);
        impl_->path_prefix = url.substr(path_start);
    }
    impl_->token = std::move(token);
    impl_->pacing_ms = pacing_ms;
    auto* client = new httplib::Client(impl_->host_base);
    client->set_connection_timeout(10);
    client->set_read_timeout(30);
    impl_->client = {client, [](void* p) { delete static_cast<httplib::Client*>(p); }};
}

HttpBlockSource::~HttpBlockSource() = default;

std::string HttpBlockSource::fetch(std::uint64_t height) {
    if (!impl_->first && impl_->pacing_ms)
        std::this_thread::sleep_for(std::chrono::milliseconds(impl_->pacing_ms));
    impl_->first = false;

    std::string path = impl_->path_prefix;
    std::string h = std::to_string(height);
    if (auto pos = path.find("{height}"); pos != std::string::npos) {
        path.replace(pos, 8, h);
    } else {
        if (path.empty() || path.back() != '/') path += '/';
        path += h;
    }

    httplib::Headers headers;
    if (!impl_->token.empty()) headers.emplace("Authorization", "Bearer " + impl_->token);
    auto* client = static_cast<httplib::Client*>(impl_->client.get());
    auto res = client->Get(path, headers);
    if (!res)
        throw SourceError(height, "transport failure fetching block " + h + " from " +
                                      impl_->host_base + path);
    if (res->status != 200)
        throw SourceError(height,
                          "HTTP " + std::to_string(res->status) + " fetching block " + h);
    return res->body;
}

std::unique_ptr<BlockSource> block_source_from_env() {
    const char* url = std::getenv("SWEEP_RPC_URL");
    if (!url || !*url) raise(Error::Code::ConfigError, "SWEEP_RPC_URL is not set");
    const char* token = std::getenv("SWEEP_RPC_TOKEN");
    return std::make_unique<HttpBlockSource>(url, token ? token : "");
}

}  // namespace sweep::corpus
