#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mrp {

enum class Errc {
    invalid_argument,
    empty_series,
    zero_variance,
    segment_too_short,
    wealth_non_positive,
    series_too_short,
    infeasible,
    no_valid_partition,
    invalid_model,
    quadrature_failed,
    degenerate_vector,
    date_mismatch,
    invalid_block,
    parse_error,
    date_order_error,
};

inline const char* errc_name(Errc code) noexcept
{
    switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::empty_series: return "EmptySeries";
    case Errc::zero_variance: return "ZeroVariance";
    case Errc::segment_too_short: return "SegmentTooShort";
    case Errc::wealth_non_positive: return "WealthNonPositive";
    case Errc::series_too_short: return "SeriesTooShort";
    case Errc::infeasible: return "Infeasible";
    case Errc::no_valid_partition: return "NoValidPartition";
    case Errc::invalid_model: return "InvalidModel";
    case Errc::quadrature_failed: return "QuadratureFailed";
    case Errc::degenerate_vector: return "DegenerateVector";
    case Errc::date_mismatch: return "DateMismatch";
    case Errc::invalid_block: return "InvalidBlock";
    case Errc::parse_error: return "ParseError";
    case Errc::date_order_error: return "DateOrderError";
    }
    return "Unknown";
}

/// Base exception for every failure raised by the library. The code lets
/// callers branch on the failure class without string matching.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
    {
    }

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Raised by the CSV reader; row is 1-based counting the header, column is 0-based.
class ParseError : public Error {
public:
    ParseError(std::size_t row, std::size_t column, const std::string& what)
        : Error(Errc::parse_error,
                "row " + std::to_string(row) + ", column " + std::to_string(column) + ": " + what),
          row_(row), column_(column)
    {
    }

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

} // namespace mrp
