#pragma once

// Scan orchestration: partition coset exponent ranges into chunks, run the
// derive-and-check pipeline across a worker pool, stream hits to a JSONL
// sink as they are found, and checkpoint completed chunks for resume.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sweep/corpus.hpp"
#include "sweep/curve.hpp"
#include "sweep/derivation.hpp"
#include "sweep/scalar_group.hpp"

namespace sweep::scan {

struct ScanJob {
    std::vector<int> cosets;                             // subset of {0..7}
    std::vector<derivation::ChainId> chains;
    std::vector<derivation::AddressKind> kinds;
    std::uint64_t start = 0;                             // exponent range [start, end)
    std::uint64_t end = scalars::kSubgroupSize;
    std::map<derivation::ChainId, std::string> corpus;       // chain -> index base path
    int threads = 1;
    std::uint64_t chunk_size = 1ULL << 16;
    std::string checkpoint_path;                         // empty: no checkpointing
    std::string out_path;                                // empty: no hit file
    std::size_t max_chunks = 0;                          // stop after N chunks (0 = all); test hook
};

struct Chunk {
    int coset;
    std::uint64_t start;
    std::uint64_t count;
};

// Covers [job.start, job.end) of every requested coset exactly once, cosets
// ascending then exponents ascending; the last chunk of a coset may be short.
std::vector<Chunk> plan_chunks(const ScanJob& job, std::uint64_t chunk_size);

struct HitRecord {
    derivation::ChainId chain;
    derivation::AddressKind kind;
    std::string address;
    std::string key_hex;
    int coset = 0;
    std::uint64_t exponent = 0;
    bool trivial = false;
    std::string timestamp;  // ISO-8601 UTC
};

// One JSONL line in the pinned field order:
// {"chain":...,"kind":...,"address":...,"key":...,"coset":i,"exponent":j,"trivial":b}
std::string hit_to_json(const HitRecord& hit);

// The (chain, kind) pairs a job actually derives, in deterministic order.
std::vector<std::pair<derivation::ChainId, derivation::AddressKind>> expand_combos(const ScanJob& job);

// Derives and checks one chunk. Every exponent in the chunk is processed;
// nothing is skipped silently.
std::vector<HitRecord> scan_chunk(const Chunk& chunk, const ScanJob& job,
                                  const curve::PrecompTable& table,
                                  const std::map<derivation::ChainId, corpus::CorpusIndex>& indices);

struct ScanSummary {
    std::uint64_t keys_scanned = 0;
    std::uint64_t addresses_derived = 0;
    std::uint64_t hits = 0;
    std::uint64_t chunks_completed = 0;
    std::uint64_t chunks_skipped = 0;  // already done per the checkpoint
    double seconds = 0;
    double keys_per_sec = 0;
};

// Digest of the parameters that define the work (cosets, chains, kinds,
// range, chunk size, corpus paths); a checkpoint only resumes a job with the
// same fingerprint.
std::string job_fingerprint(const ScanJob& job);

ScanSummary run(const ScanJob& job);
// Test variant that also collects hits in memory.
ScanSummary run(const ScanJob& job, std::vector<HitRecord>* collected_hits);

}  // namespace sweep::scan
