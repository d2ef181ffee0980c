#include "monotrend/serialization.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "monotrend/errors.hpp"

namespace monotrend {

namespace {

bool parse_double(std::string_view text, double& out) {
    // Trim surrounding whitespace and a trailing carriage return.
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    while (!text.empty() &&
           (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    if (text.empty()) return false;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

} // namespace

std::string render_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc()) throw NumericalFailure("number rendering failed");
    return std::string(buf, ptr);
}

DataSet read_csv(std::istream& in, const std::string& name) {
    DataSet data;
    std::string line;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    bool saw_rows = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
        if (view.empty()) continue;
        const auto fields = split_fields(view);
        if (fields.size() > 2) {
            throw DataError(name + ": line " + std::to_string(line_no) +
                            ": expected at most two columns, got " +
                            std::to_string(fields.size()));
        }
        std::vector<double> row(fields.size());
        bool numeric = true;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            numeric = numeric && parse_double(fields[i], row[i]);
        }
        if (!numeric) {
            if (!saw_rows) continue; // optional header line
            throw DataError(name + ": line " + std::to_string(line_no) +
                            ": malformed numeric field");
        }
        if (!saw_rows) {
            columns = fields.size();
            saw_rows = true;
        } else if (fields.size() != columns) {
            throw DataError(name + ": line " + std::to_string(line_no) +
                            ": inconsistent column count");
        }
        if (columns == 2) {
            data.ts.push_back(row[0]);
            data.ys.push_back(row[1]);
        } else {
            data.ys.push_back(row[0]);
        }
    }
    if (!saw_rows) throw DataError(name + ": no data rows");
    data.had_t_column = columns == 2;
    if (!data.had_t_column) {
        const std::size_t n = data.ys.size();
        data.ts.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            data.ts[i] = static_cast<double>(i + 1) / static_cast<double>(n);
        }
    }
    return data;
}

DataSet read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open for reading");
    return read_csv(in, path);
}

void write_csv(std::ostream& out, const std::vector<double>& ts,
               const std::vector<double>& ys) {
    if (ts.size() != ys.size()) throw InvalidInput("mismatched csv column lengths");
    out << "t,y\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        out << render_double(ts[i]) << ',' << render_double(ys[i]) << '\n';
    }
}

void write_csv_file(const std::string& path, const std::vector<double>& ts,
                    const std::vector<double>& ys) {
    std::ofstream out(path);
    if (!out) throw DataError(path + ": cannot open for writing");
    write_csv(out, ts, ys);
}

std::string spec_to_json(const DependenceSpec& spec) {
    nlohmann::json j;
    j["kind"] = to_string(spec.kind);
    j["ar"] = spec.ar;
    j["ma"] = spec.ma;
    j["hurst"] = spec.hurst;
    j["frac_d"] = spec.frac_d;
    j["marginal_var"] = spec.marginal_var;
    return j.dump(2) + "\n";
}

DependenceSpec spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed error-model json: ") + e.what());
    }
    DependenceSpec spec;
    try {
        if (!j.is_object()) throw DataError("error-model json must be an object");
        if (j.contains("kind")) spec.kind = noise_kind_from_string(j.at("kind").get<std::string>());
        if (j.contains("ar")) spec.ar = j.at("ar").get<std::vector<double>>();
        if (j.contains("ma")) spec.ma = j.at("ma").get<std::vector<double>>();
        if (j.contains("hurst")) spec.hurst = j.at("hurst").get<double>();
        if (j.contains("frac_d")) spec.frac_d = j.at("frac_d").get<double>();
        if (j.contains("marginal_var")) {
            spec.marginal_var = j.at("marginal_var").get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed error-model json: ") + e.what());
    }
    return spec;
}

} // namespace monotrend
