#pragma once

#include <string>
#include <variant>

#include "haven/series.hpp"

namespace haven {

enum class ValueKind { Price, Return };

/// Which CSV columns to read and how to interpret the value column.
struct CsvSchema {
    std::string date_column = "date";
    std::string value_column = "value";
    ValueKind value_kind = ValueKind::Price;
};

using LoadedSeries = std::variant<PriceSeries, ReturnSeries>;

/// Read a header-rowed CSV into a price or return series. Rows are sorted by
/// date on the way in; duplicate dates, non-positive prices and malformed
/// rows are rejected with the offending line number.
LoadedSeries load_series(const std::string& path, const CsvSchema& schema,
                         const std::string& asset_id);

/// load_series + log_returns when the file holds prices.
ReturnSeries load_return_series(const std::string& path, const CsvSchema& schema,
                                const std::string& asset_id);

}  // namespace haven
