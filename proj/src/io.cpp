#include "haven/io.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "haven/errors.hpp"

namespace haven {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim whitespace and surrounding quotes
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
        while (!field.empty() && field.front() == ' ') field.erase(field.begin());
        if (field.size() >= 2 && field.front() == '"' && field.back() == '"')
            field = field.substr(1, field.size() - 2);
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_number(const std::string& s, const std::string& path, std::size_t line_no) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || (end && *end != '\0'))
        throw MalformedRow(path, line_no, "cannot parse number '" + s + "'");
    return v;
}

}  // namespace

LoadedSeries load_series(const std::string& path, const CsvSchema& schema,
                         const std::string& asset_id) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw MalformedRow(path, 1, "missing header row");

    const std::vector<std::string> header = split_csv_line(line);
    std::size_t date_idx = header.size(), value_idx = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == schema.date_column) date_idx = i;
        if (header[i] == schema.value_column) value_idx = i;
    }
    if (date_idx == header.size())
        throw MalformedRow(path, 1, "date column '" + schema.date_column + "' not found");
    if (value_idx == header.size())
        throw MalformedRow(path, 1, "value column '" + schema.value_column + "' not found");

    std::vector<Observation> obs;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw MalformedRow(path, line_no,
                               "expected " + std::to_string(header.size()) + " fields, got " +
                                   std::to_string(fields.size()));
        Date d;
        try {
            d = Date::parse(fields[date_idx]);
        } catch (const Error& e) {
            throw MalformedRow(path, line_no, e.what());
        }
        obs.push_back({d, parse_number(fields[value_idx], path, line_no)});
    }

    std::stable_sort(obs.begin(), obs.end(),
                     [](const Observation& a, const Observation& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < obs.size(); ++i)
        if (obs[i].date == obs[i - 1].date)
            throw DuplicateDate(path + ": duplicate date " + obs[i].date.to_string());

    if (schema.value_kind == ValueKind::Price) {
        PriceSeries p{asset_id, std::move(obs)};
        validate_price_series(p);
        return p;
    }
    ReturnSeries r{asset_id, std::move(obs)};
    validate_return_series(r);
    return r;
}

ReturnSeries load_return_series(const std::string& path, const CsvSchema& schema,
                                const std::string& asset_id) {
    LoadedSeries s = load_series(path, schema, asset_id);
    if (std::holds_alternative<PriceSeries>(s))
        return log_returns(std::get<PriceSeries>(s));
    return std::get<ReturnSeries>(std::move(s));
}

}  // namespace haven
