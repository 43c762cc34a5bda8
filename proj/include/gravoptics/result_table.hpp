#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gravoptics
{

inline constexpr const char* kToolVersion = "1.0.0";

struct Column
{
    std::string name;
    std::string unit; ///< empty for dimensionless
};

/// Named columns with units, rows of doubles and ordered metadata.
/// Output is a pure function of the contents, so identical inputs give
/// byte-identical CSV and JSON.
class ResultTable
{
public:
    ResultTable() = default;
    explicit ResultTable(std::vector<Column> columns) : columns_(std::move(columns)) {}

    const std::vector<Column>& columns() const { return columns_; }
    const std::vector<std::vector<double>>& rows() const { return rows_; }
    const std::vector<std::pair<std::string, std::string>>& metadata() const { return metadata_; }

    /// Throws std::invalid_argument if the row width differs from the column count.
    void add_row(std::vector<double> row);
    void set_meta(const std::string& key, const std::string& value);
    void set_meta(const std::string& key, double value);
    /// Metadata value, or empty when absent.
    std::string meta(std::string_view key) const;

    /// Index of the named column; throws std::out_of_range when absent.
    std::size_t column_index(std::string_view name) const;
    double at(std::size_t row, std::string_view column) const;

    /// Metadata as "# key: value" lines, then a header row "name [unit]", then
    /// rows with %.17g numbers. Fields are quoted per RFC 4180 when needed.
    void write_csv(std::ostream& os) const;
    /// {"metadata": {...}, "columns": [{"name","unit"}], "rows": [[...]]}
    void write_json(std::ostream& os) const;

private:
    std::vector<Column> columns_;
    std::vector<std::vector<double>> rows_;
    std::vector<std::pair<std::string, std::string>> metadata_;
};

/// Shortest round-tripping representation used in all outputs ("%.17g").
std::string format_number(double x);

/// Quotes a CSV field when it contains a comma, quote, CR or LF.
std::string csv_escape(std::string_view field);

/// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

} // namespace gravoptics
