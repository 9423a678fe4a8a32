#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>

#include "sweep/error.hpp"
#include "sweep/scanner.hpp"

using namespace sweep;
using namespace sweep::scan;
using derivation::AddressKind;
using derivation::ChainId;

namespace {

std::string temp_dir() {
    static std::atomic<int> counter{0};
    auto dir = std::filesystem::temp_directory_path() /
               ("sweep_scan_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(dir);
    return dir.string();
}

const curve::PrecompTable& table() {
    static const curve::PrecompTable t;
    return t;
}

// Key for (coset, exponent) straight from the coset definition.
scalars::Scalar key_at(int coset, std::uint64_t exponent) {
    scalars::CosetIter iter(scalars::coset_spec(coset), exponent, 1);
    return iter.next()->key;
}

bool throws_code(Error::Code code, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code() == code;
    }
    return false;
}

ScanJob basic_btc_job(const std::string& corpus_base) {
    ScanJob job;
    job.cosets = {0};
    job.chains = {ChainId::BTC};
    job.kinds = {AddressKind::P2PKH_UNCOMPRESSED, AddressKind::P2PKH_COMPRESSED};
    job.corpus[ChainId::BTC] = corpus_base;
    return job;
}

std::string build_btc_corpus(const std::vector<std::string>& addresses) {
    auto base = temp_dir() + "/btc";
    corpus::IndexBuilder builder(ChainId::BTC);
    for (const auto& a : addresses) builder.add(a);
    builder.build(1e-6, base);
    return base;
}

}  // namespace

TEST_CASE("plan_chunks covers ranges exactly once") {
    ScanJob job;
    job.cosets = {4};
    job.start = 0;
    job.end = 10;
    auto chunks = plan_chunks(job, 4);
    REQUIRE(chunks.size() == 3);
    CHECK(chunks[0].start == 0);
    CHECK(chunks[0].count == 4);
    CHECK(chunks[1].start == 4);
    CHECK(chunks[1].count == 4);
    CHECK(chunks[2].start == 8);
    CHECK(chunks[2].count == 2);

    job.start = 5;
    job.end = 5;
    CHECK(plan_chunks(job, 4).empty());

    // full sweep: 8 cosets, ceil(h / 2^16) = 276 chunks each
    ScanJob full;
    full.cosets = {0, 1, 2, 3, 4, 5, 6, 7};
    auto all = plan_chunks(full, 1ULL << 16);
    CHECK(all.size() == 8 * 276);
    std::uint64_t covered = 0;
    for (const auto& c : all) covered += c.count;
    CHECK(covered == 8 * scalars::kSubgroupSize);

    // duplicate coset entries collapse
    ScanJob dup;
    dup.cosets = {2, 2, 2};
    dup.end = 10;
    CHECK(plan_chunks(dup, 100).size() == 1);
}

TEST_CASE("hit line schema is pinned") {
    HitRecord hit;
    hit.chain = ChainId::BTC;
    hit.kind = AddressKind::P2PKH_UNCOMPRESSED;
    hit.address = "1PSRcasBNEwPC2TWUB68wvQZHwXy4yqPQ3";
    hit.key_hex = std::string(64, '0');
    hit.coset = 0;
    hit.exponent = 12345;
    hit.trivial = false;
    CHECK(hit_to_json(hit) ==
          "{\"chain\":\"btc\",\"kind\":\"p2pkh_u\",\"address\":\"1PSRcasBNEwPC2TWUB68wvQZHwXy4yqPQ3\","
          "\"key\":\"" + std::string(64, '0') + "\",\"coset\":0,\"exponent\":12345,\"trivial\":false}");
}

TEST_CASE("scan_chunk finds the key-1 address and flags it trivial") {
    auto base = build_btc_corpus({"1EHNa6Q4Jz2uvNExL497mE43ikXhwF6kZm"});
    auto job = basic_btc_job(base);
    std::map<ChainId, corpus::CorpusIndex> indices;
    indices.emplace(ChainId::BTC, corpus::CorpusIndex::load(base));

    auto hits = scan_chunk(Chunk{0, 0, 64}, job, table(), indices);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].exponent == 0);
    CHECK(hits[0].kind == AddressKind::P2PKH_UNCOMPRESSED);
    CHECK(hits[0].trivial);
    CHECK(hits[0].key_hex == scalars::scalar_from_u64(1).to_hex());

    SUBCASE("empty corpus yields nothing") {
        auto empty_base = build_btc_corpus({});
        std::map<ChainId, corpus::CorpusIndex> empty_idx;
        empty_idx.emplace(ChainId::BTC, corpus::CorpusIndex::load(empty_base));
        CHECK(scan_chunk(Chunk{0, 0, 256}, job, table(), empty_idx).empty());
    }
}

TEST_CASE("run: planted keys are found exactly once, any thread count") {
    std::mt19937_64 rng(42);
    const std::uint64_t window = 3000;

    // plant 25 keys at random (coset, exponent) pairs across all chains/kinds
    struct Plant {
        int coset;
        std::uint64_t exponent;
        ChainId chain;
        AddressKind kind;
        std::string address;
    };
    std::vector<Plant> plants;
    std::vector<std::pair<ChainId, AddressKind>> all_combos;
    for (ChainId chain : derivation::kAllChains) {
        for (AddressKind kind : derivation::valid_kinds(chain)) all_combos.emplace_back(chain, kind);
    }
    for (int i = 0; i < 25; ++i) {
        Plant p;
        p.coset = static_cast<int>(rng() % 8);
        p.exponent = rng() % window;
        auto [chain, kind] = all_combos[rng() % all_combos.size()];
        p.chain = chain;
        p.kind = kind;
        p.address =
            derivation::derive(key_at(p.coset, p.exponent), chain, kind, table()).text;
        plants.push_back(p);
    }

    // per-chain corpora: planted addresses + decoys
    auto dir = temp_dir();
    ScanJob job;
    job.cosets = {0, 1, 2, 3, 4, 5, 6, 7};
    job.chains.assign(derivation::kAllChains.begin(), derivation::kAllChains.end());
    for (int i = 0; i < 6; ++i) job.kinds.push_back(static_cast<AddressKind>(i));
    job.start = 0;
    job.end = window;
    job.chunk_size = 512;
    for (ChainId chain : derivation::kAllChains) {
        corpus::IndexBuilder builder(chain);
        for (const auto& p : plants) {
            if (p.chain == chain) builder.add(p.address);
        }
        for (int d = 0; d < 2000; ++d) {
            static const char* alphabet = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz";
            std::string decoy = "9";
            for (int c = 0; c < 30; ++c) decoy.push_back(alphabet[rng() % 58]);
            builder.add(decoy);
        }
        auto base = dir + "/" + std::string(derivation::chain_name(chain));
        builder.build(1e-6, base);
        job.corpus[chain] = base;
    }

    auto expected = [&] {
        std::set<std::string> s;
        for (const auto& p : plants) {
            s.insert(std::to_string(p.coset) + "/" + std::to_string(p.exponent) + "/" +
                     std::string(derivation::chain_name(p.chain)) + "/" +
                     std::string(derivation::kind_name(p.kind)));
        }
        return s;
    }();

    std::set<std::string> first_run_keys;
    for (int threads : {1, 2, 4}) {
        job.threads = threads;
        std::vector<HitRecord> hits;
        auto summary = run(job, &hits);
        CHECK(summary.keys_scanned == 8 * window);
        CHECK(summary.hits == hits.size());

        std::set<std::string> got;
        for (const auto& h : hits) {
            got.insert(std::to_string(h.coset) + "/" + std::to_string(h.exponent) + "/" +
                       std::string(derivation::chain_name(h.chain)) + "/" +
                       std::string(derivation::kind_name(h.kind)));
            // zero false claims: re-derive and compare
            auto rederived = derivation::derive(key_at(h.coset, h.exponent), h.chain, h.kind, table());
            CHECK(rederived.text == h.address);
            CHECK(rederived.key_hex == h.key_hex);
        }
        CHECK(got == expected);
        if (threads == 1)
            first_run_keys = got;
        else
            CHECK(got == first_run_keys);  // set-determinism across thread counts
    }
}

TEST_CASE("run: checkpoint resume does not repeat completed chunks") {
    auto base = build_btc_corpus({"1EHNa6Q4Jz2uvNExL497mE43ikXhwF6kZm",
                                  "1BgGZ9tcN4rm9KBzDn7KprQz87SZ26SAMH"});
    auto dir = temp_dir();
    auto job = basic_btc_job(base);
    job.start = 0;
    job.end = 1024;
    job.chunk_size = 128;  // 8 chunks
    job.checkpoint_path = dir + "/ckpt";
    job.out_path = dir + "/hits.jsonl";
    job.threads = 1;

    job.max_chunks = 3;  // simulate an interruption after 3 completed chunks
    auto partial = run(job);
    CHECK(partial.chunks_completed == 3);
    CHECK(partial.keys_scanned == 3 * 128);

    job.max_chunks = 0;
    auto resumed = run(job);
    CHECK(resumed.chunks_skipped == 3);
    CHECK(resumed.chunks_completed == 5);
    CHECK(resumed.keys_scanned == 5 * 128);
    CHECK(partial.keys_scanned + resumed.keys_scanned == 1024);

    // the combined hit file has no duplicate lines and exactly the 2 hits
    std::ifstream in(job.out_path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    CHECK(lines.size() == 2);
    CHECK(std::set<std::string>(lines.begin(), lines.end()).size() == lines.size());

    // a fully-resumed job does nothing more
    auto third = run(job);
    CHECK(third.chunks_skipped == 8);
    CHECK(third.keys_scanned == 0);
}

TEST_CASE("run: checkpoint fingerprint mismatch aborts") {
    auto base = build_btc_corpus({});
    auto dir = temp_dir();
    auto job = basic_btc_job(base);
    job.end = 256;
    job.chunk_size = 64;
    job.checkpoint_path = dir + "/ckpt";
    run(job);

    job.end = 512;  // different job, same checkpoint file
    CHECK(throws_code(Error::Code::ConfigError, [&] { run(job); }));
}

TEST_CASE("job validation and corpus errors") {
    auto base = build_btc_corpus({});
    auto job = basic_btc_job(base);

    SUBCASE("missing corpus for a requested chain") {
        job.chains.push_back(ChainId::ETH);
        job.kinds.push_back(AddressKind::ETH_EOA);
        CHECK(throws_code(Error::Code::CorpusMissing, [&] { run(job); }));
    }
    SUBCASE("nonexistent corpus path") {
        job.corpus[ChainId::BTC] = "/nonexistent/base";
        CHECK(throws_code(Error::Code::CorpusMissing, [&] { run(job); }));
    }
    SUBCASE("kind not valid for any chain") {
        job.kinds = {AddressKind::ETH_EOA};
        CHECK(throws_code(Error::Code::ConfigError, [&] { run(job); }));
    }
    SUBCASE("chain with no applicable kind") {
        job.chains = {ChainId::BTC, ChainId::ETH};
        job.corpus[ChainId::ETH] = base;
        CHECK(throws_code(Error::Code::ConfigError, [&] { run(job); }));
    }
    SUBCASE("range beyond h") {
        job.end = scalars::kSubgroupSize + 1;
        CHECK(throws_code(Error::Code::ConfigError, [&] { run(job); }));
    }
    SUBCASE("bad coset index") {
        job.cosets = {8};
        CHECK(throws_code(Error::Code::ConfigError, [&] { run(job); }));
    }
    SUBCASE("chain mismatch in the index") {
        auto dir = temp_dir();
        corpus::IndexBuilder builder(ChainId::DOGE);
        builder.add("DBgGZ9tcN4rm9KBzDn7KprQz87SZ26SAMH");
        builder.build(1e-6, dir + "/doge");
        job.corpus[ChainId::BTC] = dir + "/doge";
        CHECK(throws_code(Error::Code::ConfigError, [&] { run(job); }));
    }
}

TEST_CASE("fingerprint depends on the work definition") {
    auto job = basic_btc_job("/tmp/x");
    auto fp1 = job_fingerprint(job);
    auto job2 = job;
    job2.threads = 16;
    job2.out_path = "/elsewhere";
    CHECK(job_fingerprint(job2) == fp1);  // execution knobs don't change identity
    job2.end -= 1;
    CHECK(job_fingerprint(job2) != fp1);
    auto job3 = job;
    job3.kinds.pop_back();
    CHECK(job_fingerprint(job3) != fp1);
}
