#pragma once

// Address corpus handling: normalization, ingestion from flat dumps and
// node-style block documents, and the two-stage membership index (bloom
// prefilter + mmap'd sorted exact store). A built index is immutable and
// safe for any number of concurrent readers; the prefilter may pass extras
// but the sorted store is authoritative, so contains() never lies.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sweep/derivation.hpp"

namespace sweep::corpus {

struct RawAddressRecord {
    derivation::ChainId chain;
    std::string text;
};

// Matching discipline per chain: BCH strips the "bitcoincash:" prefix and
// lowercases; ETH is 0x + lowercase hex; bech32 addresses are lowercased;
// Base58 chains pass through unchanged (case-significant).
std::string normalize(derivation::ChainId chain, std::string_view text);
// Buffer variant for the scan hot path; buf must hold at least text.size()+2
// bytes. Returns a view into buf or into text when unchanged.
std::string_view normalize_into(derivation::ChainId chain, std::string_view text, char* buf);

struct IngestStats {
    std::uint64_t records = 0;
    std::uint64_t malformed = 0;
    std::uint64_t outputs_without_address = 0;
    std::optional<std::uint64_t> last_height;  // block ingestion resume cursor
};

using RecordSink = std::function<void(const RawAddressRecord&)>;

// Newline-delimited dump, one address per line; optional tab-separated extra
// columns are ignored. Malformed lines are counted and skipped.
IngestStats ingest_file(const std::string& path, derivation::ChainId chain, const RecordSink& sink);

// A source of block documents in the common node-RPC JSON shape:
// block -> transactions -> outputs -> script descriptor with an address
// field or address list. fetch() throws SourceError on transport/parse
// failure.
class BlockSource {
public:
    virtual ~BlockSource() = default;
    virtual std::string fetch(std::uint64_t height) = 0;  // raw JSON document
};

// Reads <dir>/<height>.json fixtures.
class FileBlockSource : public BlockSource {
public:
    explicit FileBlockSource(std::string dir) : dir_(std::move(dir)) {}
    std::string fetch(std::uint64_t height) override;

private:
    std::string dir_;
};

// Paged HTTP source. The URL may contain "{height}", which is substituted;
// otherwise "/<height>" is appended. A nonempty token is sent as a bearer
// Authorization header. pacing_ms sleeps between requests.
class HttpBlockSource : public BlockSource {
public:
    HttpBlockSource(std::string url, std::string token, unsigned pacing_ms = 0);
    ~HttpBlockSource() override;
    std::string fetch(std::uint64_t height) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Reads SWEEP_RPC_URL / SWEEP_RPC_TOKEN from the environment.
std::unique_ptr<BlockSource> block_source_from_env();

// Walks heights [first, last], emitting every address found in any output of
// any transaction. Duplicates are allowed; dedup happens at index build.
IngestStats ingest_blocks(BlockSource& source, derivation::ChainId chain, std::uint64_t first,
                          std::uint64_t last, const RecordSink& sink);

// ---------------------------------------------------------------------------
// Index
// ---------------------------------------------------------------------------

class BloomFilter {
public:
    BloomFilter() = default;
    // Sized for n elements at the given false-positive rate.
    BloomFilter(std::uint64_t n, double fp_rate);

    void insert(std::string_view key);
    bool maybe_contains(std::string_view key) const;

    std::uint64_t num_bits() const { return num_bits_; }
    std::uint32_t num_hashes() const { return num_hashes_; }
    const std::vector<std::uint64_t>& words() const { return words_; }

    static BloomFilter from_parts(std::uint64_t num_bits, std::uint32_t num_hashes,
                                  std::vector<std::uint64_t> words);

private:
    std::uint64_t num_bits_ = 0;
    std::uint32_t num_hashes_ = 0;
    std::vector<std::uint64_t> words_;
};

// On-disk layout (<base>.meta, <base>.filter, <base>.sorted) is documented in
// docs/index_format.md and pinned by a golden-file test.
class CorpusIndex {
public:
    CorpusIndex() = default;
    CorpusIndex(CorpusIndex&&) noexcept;
    CorpusIndex& operator=(CorpusIndex&&) noexcept;
    ~CorpusIndex();

    static CorpusIndex load(const std::string& base_path);

    derivation::ChainId chain() const { return chain_; }
    std::uint64_t count() const { return count_; }
    double fp_rate() const { return fp_rate_; }

    // Exact membership; the prefilter is consulted first, the sorted store
    // confirms. The input must already be normalized.
    bool contains(std::string_view normalized_address) const;
    // Prefilter-only probe, exposed for false-positive-rate measurement.
    bool prefilter_maybe_contains(std::string_view normalized_address) const;
    // Exact-store-only probe (binary search), for cross-checks.
    bool exact_contains(std::string_view normalized_address) const;

    std::string_view entry(std::uint64_t i) const;

private:
    derivation::ChainId chain_ = derivation::ChainId::BTC;
    std::uint64_t count_ = 0;
    double fp_rate_ = 0;
    BloomFilter filter_;
    // mmap'd sorted store
    void* map_ = nullptr;
    std::size_t map_size_ = 0;
    const std::uint64_t* offsets_ = nullptr;
    const char* blob_ = nullptr;
};

// Accumulates raw records, then normalizes, dedups, sorts and writes the
// three index files. Empty input still produces a valid (empty) index.
class IndexBuilder {
public:
    explicit IndexBuilder(derivation::ChainId chain) : chain_(chain) {}

    void add(std::string_view raw_text);
    std::uint64_t pending() const { return entries_.size(); }

    // Writes <base>.meta/.filter/.sorted and returns the loaded index.
    CorpusIndex build(double fp_rate, const std::string& base_path);

private:
    derivation::ChainId chain_;
    std::vector<std::string> entries_;
};

}  // namespace sweep::corpus
