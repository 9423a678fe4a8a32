// sweep: enumerate small multiplicative cosets of the secp256k1 group order,
// derive addresses for seven chains, and check them against address corpora.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sweep/corpus.hpp"
#include "sweep/derivation.hpp"
#include "sweep/error.hpp"
#include "sweep/scalar_group.hpp"
#include "sweep/scanner.hpp"
#include "sweep/survey.hpp"

namespace {

using namespace sweep;

std::vector<derivation::ChainId> parse_chain_list(const std::string& csv) {
    std::vector<derivation::ChainId> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        auto comma = csv.find(',', pos);
        std::string token = csv.substr(pos, comma == std::string::npos ? csv.size() - pos : comma - pos);
        if (token == "all") {
            out.assign(derivation::kAllChains.begin(), derivation::kAllChains.end());
        } else if (!token.empty()) {
            auto chain = derivation::parse_chain(token);
            if (!chain) raise(Error::Code::ConfigError, "unknown chain: " + token);
            out.push_back(*chain);
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) raise(Error::Code::ConfigError, "no chains given");
    return out;
}

std::vector<derivation::AddressKind> parse_kind_list(const std::string& csv) {
    std::vector<derivation::AddressKind> out;
    if (csv == "all") {
        for (int i = 0; i < 6; ++i) out.push_back(static_cast<derivation::AddressKind>(i));
        return out;
    }
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        auto comma = csv.find(',', pos);
        std::string token = csv.substr(pos, comma == std::string::npos ? csv.size() - pos : comma - pos);
        if (!token.empty()) {
            auto kind = derivation::parse_kind(token);
            if (!kind) raise(Error::Code::ConfigError, "unknown address kind: " + token);
            out.push_back(*kind);
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) raise(Error::Code::ConfigError, "no address kinds given");
    return out;
}

std::vector<int> parse_coset_list(const std::string& text) {
    std::vector<int> out;
    if (text == "all") {
        for (int i = 0; i < 8; ++i) out.push_back(i);
        return out;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        std::string token =
            text.substr(pos, comma == std::string::npos ? text.size() - pos : comma - pos);
        if (!token.empty()) {
            if (auto dash = token.find('-'); dash != std::string::npos) {
                int lo = std::stoi(token.substr(0, dash));
                int hi = std::stoi(token.substr(dash + 1));
                for (int i = lo; i <= hi; ++i) out.push_back(i);
            } else {
                out.push_back(std::stoi(token));
            }
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) raise(Error::Code::ConfigError, "no cosets given");
    return out;
}

int cmd_derive(const std::string& key_hex, const std::string& chains_csv) {
    auto key = scalars::key_from_bytes(from_hex(key_hex));
    auto chains = parse_chain_list(chains_csv);
    curve::PrecompTable table;
    for (const auto& addr : derivation::derive_all(key, chains, table)) {
        std::printf("{\"chain\":\"%s\",\"kind\":\"%s\",\"address\":\"%s\",\"key\":\"%s\"}\n",
                    std::string(derivation::chain_name(addr.chain)).c_str(),
                    std::string(derivation::kind_name(addr.kind)).c_str(), addr.text.c_str(),
                    addr.key_hex.c_str());
    }
    return 0;
}

int cmd_scan(scan::ScanJob job, const std::string& corpus_dir, const std::string& generators_file) {
    if (!generators_file.empty()) {
        scalars::verify_generator_fixture(generators_file);
    } else if (std::filesystem::exists("coset_generators.hex")) {
        scalars::verify_generator_fixture("coset_generators.hex");
    }
    for (derivation::ChainId chain : job.chains) {
        job.corpus[chain] = corpus_dir + "/" + std::string(derivation::chain_name(chain));
    }
    if (job.out_path.empty()) job.out_path = "/dev/stdout";
    auto summary = scan::run(job);
    std::fprintf(stderr,
                 "scan complete: keys=%llu derived=%llu hits=%llu chunks=%llu skipped=%llu "
                 "elapsed=%.1fs rate=%.0f keys/s\n",
                 static_cast<unsigned long long>(summary.keys_scanned),
                 static_cast<unsigned long long>(summary.addresses_derived),
                 static_cast<unsigned long long>(summary.hits),
                 static_cast<unsigned long long>(summary.chunks_completed),
                 static_cast<unsigned long long>(summary.chunks_skipped), summary.seconds,
                 summary.keys_per_sec);
    return summary.hits > 0 ? 2 : 0;
}

int cmd_survey(const std::string& curve_name, std::uint64_t budget, double rate, bool json) {
    const auto* profile = survey::profile_by_name(curve_name);
    if (!profile) raise(Error::Code::ConfigError, "unknown curve: " + curve_name);
    auto catalog = survey::divisors_under(*profile, budget);
    survey::ReportOptions options;
    options.keys_per_sec = rate;
    options.json = json;
    std::fputs(survey::report(catalog, options).c_str(), stdout);
    if (!json) std::fputc('\n', stdout);
    return 0;
}

int cmd_build_index(const std::string& chain_name, const std::string& input,
                    const std::string& out_base, double fp_rate) {
    auto chain = derivation::parse_chain(chain_name);
    if (!chain) raise(Error::Code::ConfigError, "unknown chain: " + chain_name);
    corpus::IndexBuilder builder(*chain);
    auto stats = corpus::ingest_file(input, *chain, [&](const corpus::RawAddressRecord& rec) {
        builder.add(rec.text);
    });
    auto index = builder.build(fp_rate, out_base);
    std::fprintf(stderr, "indexed %llu distinct addresses (%llu records, %llu malformed) -> %s.{meta,filter,sorted}\n",
                 static_cast<unsigned long long>(index.count()),
                 static_cast<unsigned long long>(stats.records),
                 static_cast<unsigned long long>(stats.malformed), out_base.c_str());
    return 0;
}

int cmd_ingest_blocks(const std::string& chain_name, const std::string& dir,
                      const std::string& url, const std::string& token, unsigned pace_ms,
                      std::uint64_t from, std::uint64_t to, const std::string& out_path) {
    auto chain = derivation::parse_chain(chain_name);
    if (!chain) raise(Error::Code::ConfigError, "unknown chain: " + chain_name);
    std::unique_ptr<corpus::BlockSource> source;
    if (!dir.empty()) {
        source = std::make_unique<corpus::FileBlockSource>(dir);
    } else if (!url.empty()) {
        source = std::make_unique<corpus::HttpBlockSource>(url, token, pace_ms);
    } else {
        source = corpus::block_source_from_env();
    }
    std::FILE* out = std::fopen(out_path.c_str(), "wb");
    if (!out) raise(Error::Code::FileUnreadable, "cannot create " + out_path);
    corpus::IngestStats stats;
    try {
        stats = corpus::ingest_blocks(*source, *chain, from, to,
                                      [&](const corpus::RawAddressRecord& rec) {
                                          std::fprintf(out, "%s\n", rec.text.c_str());
                                      });
    } catch (const SourceError& e) {
        std::fclose(out);
        std::fprintf(stderr, "source error at height %llu: %s\n",
                     static_cast<unsigned long long>(e.height()), e.what());
        return 1;
    }
    std::fclose(out);
    std::fprintf(stderr, "extracted %llu addresses (%llu outputs without address), last height %llu -> %s\n",
                 static_cast<unsigned long long>(stats.records),
                 static_cast<unsigned long long>(stats.outputs_without_address),
                 static_cast<unsigned long long>(stats.last_height.value_or(0)), out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"secp256k1 coset scanner and blockchain address toolkit"};
    app.require_subcommand(1);

    // derive
    auto* derive_cmd = app.add_subcommand("derive", "derive every address variant for one key");
    std::string key_hex, derive_chains = "all";
    derive_cmd->add_option("--key", key_hex, "private key, 64 hex chars")->required();
    derive_cmd->add_option("--chains", derive_chains, "comma list: btc,eth,doge,ltc,dash,zec,bch or all");

    // scan
    auto* scan_cmd = app.add_subcommand("scan", "scan coset exponent ranges against address corpora");
    std::string cosets = "0", scan_chains = "btc", kinds = "all", corpus_dir;
    std::string out_path, checkpoint_path, generators_file;
    std::uint64_t start = 0;
    std::uint64_t count = scalars::kSubgroupSize;
    std::uint64_t chunk_size = 1ULL << 16;
    int threads = 1;
    scan_cmd->add_option("--cosets", cosets, "coset indices: 0, 0-7, all, or comma list");
    scan_cmd->add_option("--chains", scan_chains, "comma list of chains or all");
    scan_cmd->add_option("--kinds", kinds, "all or comma list: p2pkh_u,p2pkh_c,segwit,eth,cashaddr_u,cashaddr_c");
    scan_cmd->add_option("--corpus-dir", corpus_dir, "directory of per-chain index files (<chain>.meta/.filter/.sorted)")
        ->required();
    scan_cmd->add_option("--start", start, "first exponent (default 0)");
    scan_cmd->add_option("--count", count, "number of exponents per coset (default full range)");
    scan_cmd->add_option("--threads", threads, "worker threads");
    scan_cmd->add_option("--chunk-size", chunk_size, "exponents per work chunk");
    scan_cmd->add_option("--out", out_path, "hit output file (JSON lines; default stdout)");
    scan_cmd->add_option("--checkpoint", checkpoint_path, "checkpoint file for resume");
    scan_cmd->add_option("--generators-file", generators_file,
                         "coset generator fixture to cross-check at startup");

    // survey
    auto* survey_cmd = app.add_subcommand("survey", "catalog subgroup orders for a curve");
    std::string curve_name = "secp256k1";
    std::uint64_t budget = 100000000;
    double rate = 50000.0;
    bool json = false;
    survey_cmd->add_option("--curve", curve_name, "secp256k1, curve25519 or p256");
    survey_cmd->add_option("--budget", budget, "largest subgroup order to catalog");
    survey_cmd->add_option("--rate", rate, "keys/sec used for scan-time estimates");
    survey_cmd->add_flag("--json", json, "machine-readable output");

    // build-index
    auto* index_cmd = app.add_subcommand("build-index", "build a corpus membership index from a dump");
    std::string index_chain, index_input, index_out;
    double fp_rate = 1e-6;
    index_cmd->add_option("--chain", index_chain, "chain the dump belongs to")->required();
    index_cmd->add_option("--input", index_input, "newline-delimited address dump")->required();
    index_cmd->add_option("--out", index_out, "output base path (three files are written)")->required();
    index_cmd->add_option("--fp-rate", fp_rate, "prefilter false-positive rate");

    // ingest-blocks
    auto* ingest_cmd = app.add_subcommand("ingest-blocks", "extract addresses from block documents");
    std::string ingest_chain, ingest_dir, ingest_url, ingest_token, ingest_out;
    unsigned pace_ms = 0;
    std::uint64_t from = 0, to = 0;
    ingest_cmd->add_option("--chain", ingest_chain, "chain of the block source")->required();
    ingest_cmd->add_option("--dir", ingest_dir, "directory of <height>.json documents");
    ingest_cmd->add_option("--url", ingest_url, "HTTP block endpoint ({height} is substituted; default $SWEEP_RPC_URL)");
    ingest_cmd->add_option("--token", ingest_token, "bearer token (default $SWEEP_RPC_TOKEN)");
    ingest_cmd->add_option("--pace", pace_ms, "milliseconds between requests");
    ingest_cmd->add_option("--from", from, "first block height")->required();
    ingest_cmd->add_option("--to", to, "last block height")->required();
    ingest_cmd->add_option("--out", ingest_out, "address dump to write")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (derive_cmd->parsed()) return cmd_derive(key_hex, derive_chains);
        if (scan_cmd->parsed()) {
            scan::ScanJob job;
            job.cosets = parse_coset_list(cosets);
            job.chains = parse_chain_list(scan_chains);
            job.kinds = parse_kind_list(kinds);
            job.start = start;
            if (count > scalars::kSubgroupSize - start)
                raise(Error::Code::ConfigError, "start + count exceeds the coset cardinality");
            job.end = start + count;
            job.threads = threads;
            job.chunk_size = chunk_size;
            job.out_path = out_path;
            job.checkpoint_path = checkpoint_path;
            return cmd_scan(std::move(job), corpus_dir, generators_file);
        }
        if (survey_cmd->parsed()) return cmd_survey(curve_name, budget, rate, json);
        if (index_cmd->parsed()) return cmd_build_index(index_chain, index_input, index_out, fp_rate);
        if (ingest_cmd->parsed())
            return cmd_ingest_blocks(ingest_chain, ingest_dir, ingest_url, ingest_token, pace_ms,
                                     from, to, ingest_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
