#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hdfts {

// Base error carrying a stable machine-readable code. The CLI prints
// errors as "<code>: <message>" on one line.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error("parse_error", msg) {}
};

struct IngestError : Error {
    explicit IngestError(const std::string& msg) : Error("ingest_error", msg) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error("domain_error", msg) {}
};

struct InsufficientData : Error {
    explicit InsufficientData(const std::string& msg) : Error("insufficient_data", msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error("config_error", msg) {}
};

struct UnderdeterminedDesign : Error {
    explicit UnderdeterminedDesign(const std::string& msg) : Error("underdetermined_design", msg) {}
};

struct SingularDesign : Error {
    explicit SingularDesign(const std::string& msg) : Error("singular_design", msg) {}
};

struct DegenerateSpectrum : Error {
    explicit DegenerateSpectrum(const std::string& msg) : Error("degenerate_spectrum", msg) {}
};

struct CoverageError : Error {
    explicit CoverageError(const std::string& msg) : Error("coverage_error", msg) {}
};

}  // namespace hdfts
