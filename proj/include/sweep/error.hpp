#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sweep {

// One exception type for the whole library; the code pins the failure kind
// so callers and tests can dispatch without string matching.
class Error : public std::runtime_error {
public:
    enum class Code {
        OutOfRange,
        ZeroKey,
        ZeroBase,
        IndexOutOfRange,
        NonDivisor,
        RangeOverflow,
        InfinityPoint,
        BadLength,
        BadChecksum,
        BadAlphabet,
        BadProgramLength,
        BadHashLength,
        InvalidCombination,
        EmptyInput,
        FileUnreadable,
        SourceError,
        DiskFull,
        EmptyCorpus,
        ConfigError,
        CorpusMissing,
        CatalogTooLarge,
        Internal,
    };

    Error(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Code code() const { return code_; }

private:
    Code code_;
};

// Transport or parse failure while walking a block source; carries the height
// so a caller can resume.
class SourceError : public Error {
public:
    SourceError(std::uint64_t height, const std::string& what)
        : Error(Code::SourceError, what), height_(height) {}

    std::uint64_t height() const { return height_; }

private:
    std::uint64_t height_;
};

[[noreturn]] inline void raise(Error::Code code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace sweep
