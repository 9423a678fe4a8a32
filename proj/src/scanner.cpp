#include "sweep/scanner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "sweep/error.hpp"
#include "sweep/hex.hpp"

namespace sweep::scan {

namespace {

constexpr std::size_t kBatchSize = 1024;

std::string utc_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void validate(const ScanJob& job) {
    if (job.cosets.empty()) raise(Error::Code::ConfigError, "no cosets requested");
    for (int c : job.cosets) {
        if (c < 0 || c > 7) raise(Error::Code::ConfigError, "coset index out of range");
    }
    if (job.chains.empty()) raise(Error::Code::ConfigError, "no chains requested");
    if (job.kinds.empty()) raise(Error::Code::ConfigError, "no address kinds requested");
    for (derivation::AddressKind kind : job.kinds) {
        bool anywhere = std::any_of(job.chains.begin(), job.chains.end(), [&](derivation::ChainId c) {
            return derivation::is_valid_combination(c, kind);
        });
        if (!anywhere)
            raise(Error::Code::ConfigError, "kind " + std::string(derivation::kind_name(kind)) +
                                                " is not valid for any requested chain");
    }
    for (derivation::ChainId chain : job.chains) {
        bool any = std::any_of(job.kinds.begin(), job.kinds.end(), [&](derivation::AddressKind k) {
            return derivation::is_valid_combination(chain, k);
        });
        if (!any)
            raise(Error::Code::ConfigError, "no requested kind applies to chain " +
                                                std::string(derivation::chain_name(chain)));
    }
    if (job.start > job.end || job.end > scalars::kSubgroupSize)
        raise(Error::Code::ConfigError, "exponent range must satisfy start <= end <= h");
    if (job.threads < 1) raise(Error::Code::ConfigError, "thread count must be positive");
    if (job.chunk_size < 1) raise(Error::Code::ConfigError, "chunk size must be positive");
}

}  // namespace

std::vector<Chunk> plan_chunks(const ScanJob& job, std::uint64_t chunk_size) {
    std::vector<int> cosets = job.cosets;
    std::sort(cosets.begin(), cosets.end());
    cosets.erase(std::unique(cosets.begin(), cosets.end()), cosets.end());
    std::vector<Chunk> out;
    for (int coset : cosets) {
        for (std::uint64_t s = job.start; s < job.end; s += chunk_size) {
            out.push_back(Chunk{coset, s, std::min(chunk_size, job.end - s)});
        }
    }
    return out;
}

std::vector<std::pair<derivation::ChainId, derivation::AddressKind>> expand_combos(const ScanJob& job) {
    std::vector<std::pair<derivation::ChainId, derivation::AddressKind>> combos;
    for (derivation::ChainId chain : job.chains) {
        for (derivation::AddressKind kind : derivation::valid_kinds(chain)) {
            if (std::find(job.kinds.begin(), job.kinds.end(), kind) != job.kinds.end())
                combos.emplace_back(chain, kind);
        }
    }
    return combos;
}

std::string hit_to_json(const HitRecord& hit) {
    std::string out;
    out.reserve(192);
    out += "{\"chain\":\"";
    out += derivation::chain_name(hit.chain);
    out += "\",\"kind\":\"";
    out += derivation::kind_name(hit.kind);
    out += "\",\"address\":\"";
    out += hit.address;
    out += "\",\"key\":\"";
    out += hit.key_hex;
    out += "\",\"coset\":";
    out += std::to_string(hit.coset);
    out += ",\"exponent\":";
    out += std::to_string(hit.exponent);
    out += ",\"trivial\":";
    out += hit.trivial ? "true" : "false";
    out += "}";
    return out;
}

std::vector<HitRecord> scan_chunk(const Chunk& chunk, const ScanJob& job,
                                  const curve::PrecompTable& table,
                                  const std::map<derivation::ChainId, corpus::CorpusIndex>& indices) {
    auto combos = expand_combos(job);
    auto needs = derivation::digest_needs(combos);
    auto spec = scalars::coset_spec(chunk.coset);
    scalars::CosetIter iter(spec, chunk.start, chunk.count);

    std::vector<HitRecord> hits;
    std::vector<scalars::CosetIter::Item> batch;
    std::vector<curve::JacobianPoint> points;
    batch.reserve(kBatchSize);
    points.reserve(kBatchSize);
    char norm_buf[80];

    for (;;) {
        batch.clear();
        while (batch.size() < kBatchSize) {
            auto item = iter.next();
            if (!item) break;
            batch.push_back(*item);
        }
        if (batch.empty()) break;

        points.clear();
        for (const auto& item : batch) points.push_back(curve::scalar_mul(item.key, table));
        auto affine = curve::batch_normalize(points);

        for (std::size_t i = 0; i < batch.size(); ++i) {
            auto digests = derivation::make_key_digests(affine[i], needs);
            for (const auto& [chain, kind] : combos) {
                auto addr = derivation::render_address(chain, kind, digests);
                auto normalized = corpus::normalize_into(chain, addr.view(), norm_buf);
                if (indices.at(chain).contains(normalized)) {
                    HitRecord hit;
                    hit.chain = chain;
                    hit.kind = kind;
                    hit.address = addr.str();
                    hit.key_hex = batch[i].key.to_hex();
                    hit.coset = chunk.coset;
                    hit.exponent = batch[i].exponent;
                    hit.trivial = scalars::is_trivial_key(batch[i].key);
                    hit.timestamp = utc_now();
                    hits.push_back(std::move(hit));
                }
            }
        }
    }
    return hits;
}

std::string job_fingerprint(const ScanJob& job) {
    std::ostringstream os;
    std::vector<int> cosets = job.cosets;
    std::sort(cosets.begin(), cosets.end());
    os << "cosets=";
    for (int c : cosets) os << c << ',';
    os << ";chains=";
    for (derivation::ChainId c : job.chains) os << derivation::chain_name(c) << ',';
    os << ";kinds=";
    for (derivation::AddressKind k : job.kinds) os << derivation::kind_name(k) << ',';
    os << ";start=" << job.start << ";end=" << job.end << ";chunk=" << job.chunk_size;
    os << ";corpus=";
    for (const auto& [chain, path] : job.corpus) os << derivation::chain_name(chain) << ':' << path << ',';
    std::string s = os.str();
    auto digest = codecs::sha256({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
    return to_hex(digest);
}

namespace {

class CheckpointFile {
public:
    // Opens or creates; returns the set of completed chunk ids.
    std::set<std::uint64_t> open(const std::string& path, const std::string& fingerprint,
                                 std::uint64_t chunk_size) {
        std::set<std::uint64_t> done;
        std::ifstream in(path);
        if (in) {
            std::string header;
            if (!std::getline(in, header))
                raise(Error::Code::ConfigError, "empty checkpoint file: " + path);
            std::string expect = "fingerprint=" + fingerprint + " chunk_size=" + std::to_string(chunk_size);
            if (header != expect)
                raise(Error::Code::ConfigError,
                      "checkpoint does not match this job (delete it to start over): " + path);
            std::string line;
            while (std::getline(in, line)) {
                if (!line.empty()) done.insert(std::stoull(line));
            }
            out_ = std::fopen(path.c_str(), "ab");
        } else {
            out_ = std::fopen(path.c_str(), "wb");
            if (out_) {
                std::fprintf(out_, "fingerprint=%s chunk_size=%llu\n", fingerprint.c_str(),
                             static_cast<unsigned long long>(chunk_size));
                std::fflush(out_);
            }
        }
        if (!out_) raise(Error::Code::FileUnreadable, "cannot open checkpoint file: " + path);
        return done;
    }

    void mark(std::uint64_t chunk_id) {
        std::fprintf(out_, "%llu\n", static_cast<unsigned long long>(chunk_id));
        std::fflush(out_);
    }

    ~CheckpointFile() {
        if (out_) std::fclose(out_);
    }

private:
    std::FILE* out_ = nullptr;
};

}  // namespace

ScanSummary run(const ScanJob& job) { return run(job, nullptr); }

ScanSummary run(const ScanJob& job, std::vector<HitRecord>* collected_hits) {
    validate(job);

    std::map<derivation::ChainId, corpus::CorpusIndex> indices;
    for (derivation::ChainId chain : job.chains) {
        auto it = job.corpus.find(chain);
        if (it == job.corpus.end())
            raise(Error::Code::CorpusMissing,
                  "no corpus index configured for chain " + std::string(derivation::chain_name(chain)));
        corpus::CorpusIndex idx;
        try {
            idx = corpus::CorpusIndex::load(it->second);
        } catch (const Error& e) {
            if (e.code() == Error::Code::FileUnreadable)
                raise(Error::Code::CorpusMissing, "corpus index not found: " + it->second);
            throw;
        }
        if (idx.chain() != chain)
            raise(Error::Code::ConfigError,
                  "corpus index " + it->second + " was built for a different chain");
        indices.emplace(chain, std::move(idx));
    }

    const curve::PrecompTable table;
    auto plan = plan_chunks(job, job.chunk_size);
    const std::size_t derivations_per_key = expand_combos(job).size();

    std::set<std::uint64_t> done;
    CheckpointFile checkpoint;
    const bool checkpointing = !job.checkpoint_path.empty();
    if (checkpointing)
        done = checkpoint.open(job.checkpoint_path, job_fingerprint(job), job.chunk_size);

    std::vector<std::uint64_t> pending;
    for (std::uint64_t id = 0; id < plan.size(); ++id) {
        if (!done.count(id)) pending.push_back(id);
    }
    ScanSummary summary;
    summary.chunks_skipped = plan.size() - pending.size();
    if (job.max_chunks && pending.size() > job.max_chunks) pending.resize(job.max_chunks);

    std::FILE* out = nullptr;
    if (!job.out_path.empty()) {
        out = std::fopen(job.out_path.c_str(), "ab");
        if (!out) raise(Error::Code::FileUnreadable, "cannot open hit output: " + job.out_path);
    }

    std::atomic<std::size_t> next{0};
    std::atomic<std::uint64_t> keys{0}, hits{0};
    std::mutex sink_mutex;
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto started = std::chrono::steady_clock::now();
    auto worker = [&] {
        try {
            for (;;) {
                std::size_t at = next.fetch_add(1);
                if (at >= pending.size()) return;
                const Chunk& chunk = plan[pending[at]];
                auto chunk_hits = scan_chunk(chunk, job, table, indices);
                keys.fetch_add(chunk.count);
                hits.fetch_add(chunk_hits.size());
                std::lock_guard lock(sink_mutex);
                for (const auto& hit : chunk_hits) {
                    if (out) {
                        std::string line = hit_to_json(hit);
                        std::fwrite(line.data(), 1, line.size(), out);
                        std::fputc('\n', out);
                        std::fflush(out);
                    }
                    if (collected_hits) collected_hits->push_back(hit);
                }
                if (checkpointing) checkpoint.mark(pending[at]);
                ++summary.chunks_completed;
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(pending.size());  // drain remaining work
        }
    };

    std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(job.threads),
                                                 std::max<std::size_t>(pending.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (out) std::fclose(out);
    if (failure) std::rethrow_exception(failure);

    summary.keys_scanned = keys.load();
    summary.addresses_derived = summary.keys_scanned * derivations_per_key;
    summary.hits = hits.load();
    summary.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    summary.keys_per_sec = summary.seconds > 0 ? static_cast<double>(summary.keys_scanned) / summary.seconds : 0;
    return summary;
}

}  // namespace sweep::scan
