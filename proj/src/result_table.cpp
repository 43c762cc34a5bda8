#include "gravoptics/result_table.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace gravoptics
{

void ResultTable::add_row(std::vector<double> row)
{
    if (row.size() != columns_.size())
        throw std::invalid_argument("row has " + std::to_string(row.size()) + " values for " +
                                    std::to_string(columns_.size()) + " columns");
    rows_.push_back(std::move(row));
}

void ResultTable::set_meta(const std::string& key, const std::string& value)
{
    for (auto& kv : metadata_)
        if (kv.first == key)
        {
            kv.second = value;
            return;
        }
    metadata_.emplace_back(key, value);
}

void ResultTable::set_meta(const std::string& key, double value) { set_meta(key, format_number(value)); }

std::string ResultTable::meta(std::string_view key) const
{
    for (const auto& kv : metadata_)
        if (kv.first == key)
            return kv.second;
    return {};
}

std::size_t ResultTable::column_index(std::string_view name) const
{
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i].name == name)
            return i;
    throw std::out_of_range("no column named '" + std::string(name) + "'");
}

double ResultTable::at(std::size_t row, std::string_view column) const { return rows_.at(row).at(column_index(column)); }

void ResultTable::write_csv(std::ostream& os) const
{
    for (const auto& [k, v] : metadata_)
        os << "# " << k << ": " << v << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i)
    {
        const auto& c = columns_[i];
        os << (i ? "," : "") << csv_escape(c.unit.empty() ? c.name : c.name + " [" + c.unit + "]");
    }
    os << "\n";
    for (const auto& row : rows_)
    {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << format_number(row[i]);
        os << "\n";
    }
}

void ResultTable::write_json(std::ostream& os) const
{
    // ordered_json keeps metadata in insertion order
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : metadata_)
        meta[k] = v;
    nlohmann::ordered_json cols = nlohmann::ordered_json::array();
    for (const auto& c : columns_)
        cols.push_back({{"name", c.name}, {"unit", c.unit}});
    // numbers go through format_number so JSON and CSV carry identical digits
    std::string rows = "[";
    for (std::size_t r = 0; r < rows_.size(); ++r)
    {
        rows += r ? ",\n    [" : "\n    [";
        for (std::size_t i = 0; i < rows_[r].size(); ++i)
        {
            const double x = rows_[r][i];
            rows += (i ? ", " : "") + (std::isfinite(x) ? format_number(x) : std::string("null"));
        }
        rows += "]";
    }
    rows += rows_.empty() ? "]" : "\n  ]";
    os << "{\n  \"metadata\": " << meta.dump() << ",\n  \"columns\": " << cols.dump() << ",\n  \"rows\": " << rows
       << "\n}\n";
}

std::string format_number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_escape(std::string_view field)
{
    if (field.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(field);
    std::string out = "\"";
    for (char ch : field)
    {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string fnv1a_hex(std::string_view bytes)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : bytes)
    {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace gravoptics
