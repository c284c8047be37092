#ifndef WCLUSTER_ERROR_HPP
#define WCLUSTER_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace wcluster {

enum class Errc {
    NotSpd,
    IllConditioned,
    NonFinite,
    DimMismatch,
    NumericalBreakdown,
    MaxIterExceeded,
    OutOfRange,
    InvalidArgument,
    EmptyCluster,
    SizeMismatch,
    KTooLarge,
    ParseError,
    SchemaError,
    TooFewRecords,
    OverlappingPeriods,
    Io,
};

std::string_view to_string(Errc code) noexcept;

/// Single exception type for the library; `code()` carries the failure category.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace wcluster

#endif  // WCLUSTER_ERROR_HPP
