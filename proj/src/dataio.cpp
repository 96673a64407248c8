#include "spectest/dataio.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace spectest {

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file '" + path + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

bool is_blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_line(const std::string& line, bool comma) {
    std::vector<std::string> cells;
    if (comma) {
        std::string cell;
        std::stringstream ss(line);
        while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
        if (!line.empty() && line.back() == ',') cells.emplace_back();
    } else {
        std::istringstream ss(line);
        std::string tok;
        while (ss >> tok) cells.push_back(tok);
    }
    return cells;
}

// Surplus cells fold into the last column (free-text trailing fields);
// short rows pad with empties.
std::vector<std::string> normalize_row(std::vector<std::string> cells, std::size_t width) {
    if (cells.size() > width) {
        std::string tail = cells[width - 1];
        for (std::size_t k = width; k < cells.size(); ++k) tail += " " + cells[k];
        cells.resize(width);
        cells[width - 1] = std::move(tail);
    }
    while (cells.size() < width) cells.emplace_back();
    return cells;
}

bool parse_double(const std::string& cell, double* out) {
    const std::string s = trim(cell);
    if (s.empty()) return false;
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + s.size()) return false;
    if (!std::isfinite(v)) return false;
    *out = v;
    return true;
}

std::string normalize_name(const std::string& name) {
    std::string out;
    for (char c : name) {
        if (c == ' ' || c == '.' || c == '-') out += '_';
        else out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::size_t find_column(const RawTable& table, const std::string& name) {
    for (std::size_t k = 0; k < table.columns.size(); ++k)
        if (table.columns[k] == name) return k;
    throw std::invalid_argument("column '" + name + "' not found in table");
}

RawTable table_from_lines(const std::vector<std::string>& lines, bool has_header,
                          const std::vector<std::string>& synthetic_header) {
    std::vector<std::string> body;
    for (const auto& line : lines)
        if (!is_blank(line)) body.push_back(line);
    if (body.empty()) throw std::invalid_argument("table: file has no content");

    const bool comma = body.front().find(',') != std::string::npos;
    RawTable table;
    std::size_t first_row = 0;
    if (has_header) {
        table.columns = split_line(body.front(), comma);
        first_row = 1;
    } else {
        table.columns = synthetic_header;
    }
    if (table.columns.empty()) throw std::invalid_argument("table: empty header");
    for (std::size_t r = first_row; r < body.size(); ++r)
        table.rows.push_back(normalize_row(split_line(body[r], comma), table.columns.size()));
    return table;
}

const char* const kAutoMpgColumns[] = {"mpg",          "cylinders", "displacement",
                                       "horsepower",   "weight",    "acceleration",
                                       "model_year",   "origin",    "car_name"};

std::string format_double(double v, const char* fmt) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

} // namespace

RawTable read_table(const std::string& path) {
    return table_from_lines(read_lines(path), /*has_header=*/true, {});
}

DataSet load_csv(const std::string& path, const ColumnSchema& schema, LoadReport* report) {
    if (schema.response.empty())
        throw std::invalid_argument("load_csv: schema has no response column");
    const RawTable table = read_table(path);

    std::vector<std::string> predictors = schema.predictors;
    if (predictors.empty()) {
        for (const auto& col : table.columns)
            if (col != schema.response) predictors.push_back(col);
    }
    if (predictors.empty())
        throw std::invalid_argument("load_csv: no predictor columns");

    const std::size_t y_col = find_column(table, schema.response);
    std::vector<std::size_t> x_cols;
    x_cols.reserve(predictors.size());
    for (const auto& name : predictors) x_cols.push_back(find_column(table, name));

    std::vector<double> ys;
    std::vector<std::vector<double>> xs;
    int dropped = 0;
    for (const auto& row : table.rows) {
        double y = 0.0;
        std::vector<double> x(x_cols.size());
        bool good = parse_double(row[y_col], &y);
        for (std::size_t k = 0; good && k < x_cols.size(); ++k)
            good = parse_double(row[x_cols[k]], &x[k]);
        if (!good) {
            ++dropped;
            continue;
        }
        ys.push_back(y);
        xs.push_back(std::move(x));
    }
    if (report) report->dropped_rows = dropped;
    if (xs.size() < 2)
        throw std::invalid_argument("load_csv: fewer than 2 usable rows in '" + path + "'");

    Eigen::MatrixXd X(static_cast<Eigen::Index>(xs.size()),
                      static_cast<Eigen::Index>(x_cols.size()));
    Eigen::VectorXd y(static_cast<Eigen::Index>(ys.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        y[static_cast<Eigen::Index>(i)] = ys[i];
        for (std::size_t k = 0; k < xs[i].size(); ++k)
            X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = xs[i][k];
    }
    return make_dataset(std::move(X), std::move(y), std::move(predictors));
}

DataSet standardize(const DataSet& data, const StandardizeOptions& opts) {
    data.validate();
    DataSet out = data;
    const double n = static_cast<double>(data.n());

    auto column_name = [&](Eigen::Index c) {
        return data.names.empty() ? "column " + std::to_string(c) : data.names[c];
    };
    auto skipped = [&](Eigen::Index c) {
        return !data.names.empty() &&
               std::find(opts.skip.begin(), opts.skip.end(), data.names[c]) != opts.skip.end();
    };

    for (Eigen::Index c = 0; c < data.p(); ++c) {
        if (skipped(c)) continue;
        const double mean = data.X.col(c).mean();
        const double sd =
            std::sqrt((data.X.col(c).array() - mean).square().sum() / (n - 1.0));
        if (!(sd > 0.0))
            throw std::invalid_argument("standardize: zero variance in " + column_name(c));
        out.X.col(c) = (data.X.col(c).array() - mean) / sd;
    }
    if (opts.include_response) {
        const double mean = data.y.mean();
        const double sd = std::sqrt((data.y.array() - mean).square().sum() / (n - 1.0));
        if (!(sd > 0.0)) throw std::invalid_argument("standardize: zero variance in response");
        out.y = (data.y.array() - mean) / sd;
    }
    return out;
}

DataSet encode_autompg(const RawTable& raw, LoadReport* report) {
    // Locate the raw columns by (normalized) name.
    std::map<std::string, std::size_t> index;
    for (std::size_t k = 0; k < raw.columns.size(); ++k)
        index[normalize_name(raw.columns[k])] = k;
    auto need = [&](const std::string& name) {
        auto it = index.find(name);
        if (it == index.end())
            throw std::invalid_argument("auto-mpg table: missing column '" + name + "'");
        return it->second;
    };

    const std::size_t c_mpg = need("mpg");
    // Predictors in test order: year, acceleration, weight, horsepower,
    // displacement, cylinders, then the origin dummies.
    const std::size_t cols[6] = {need("model_year"), need("acceleration"), need("weight"),
                                 need("horsepower"), need("displacement"), need("cylinders")};
    const std::size_t c_origin = need("origin");

    std::vector<double> ys;
    std::vector<std::array<double, 8>> xs;
    int dropped = 0;
    for (const auto& row : raw.rows) {
        double mpg = 0.0, origin = 0.0;
        std::array<double, 8> x{};
        bool good = parse_double(row[c_mpg], &mpg);
        for (int k = 0; good && k < 6; ++k) good = parse_double(row[cols[k]], &x[k]);
        good = good && parse_double(row[c_origin], &origin);
        if (!good) {
            ++dropped;  // e.g. the horsepower "?" rows
            continue;
        }
        if (origin != 1.0 && origin != 2.0 && origin != 3.0)
            throw std::invalid_argument("auto-mpg table: unknown origin code '" +
                                        trim(row[c_origin]) + "'");
        x[6] = origin == 1.0 ? 1.0 : 0.0;  // America
        x[7] = origin == 2.0 ? 1.0 : 0.0;  // Europe; Japan is the reference
        ys.push_back(mpg);
        xs.push_back(x);
    }
    if (report) report->dropped_rows = dropped;
    if (xs.size() < 2)
        throw std::invalid_argument("auto-mpg table: fewer than 2 usable rows");

    Eigen::MatrixXd X(static_cast<Eigen::Index>(xs.size()), 8);
    Eigen::VectorXd y(static_cast<Eigen::Index>(ys.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        y[static_cast<Eigen::Index>(i)] = ys[i];
        for (int k = 0; k < 8; ++k) X(static_cast<Eigen::Index>(i), k) = xs[i][k];
    }
    DataSet data = make_dataset(std::move(X), std::move(y),
                                {"model_year", "acceleration", "weight", "horsepower",
                                 "displacement", "cylinders", "origin_america",
                                 "origin_europe"});
    StandardizeOptions opts;
    opts.skip = {"origin_america", "origin_europe"};
    return standardize(data, opts);
}

DataSet load_autompg(const std::string& path, LoadReport* report) {
    const std::vector<std::string> lines = read_lines(path);
    // Headerless UCI layout: the first cell of the first line is numeric.
    bool headerless = false;
    for (const auto& line : lines) {
        if (is_blank(line)) continue;
        const bool comma = line.find(',') != std::string::npos;
        const auto cells = split_line(line, comma);
        double v = 0.0;
        headerless = !cells.empty() && parse_double(cells.front(), &v);
        break;
    }
    std::vector<std::string> synthetic(std::begin(kAutoMpgColumns), std::end(kAutoMpgColumns));
    const RawTable table = table_from_lines(lines, !headerless, synthetic);
    return encode_autompg(table, report);
}

DataSet with_intercept(const DataSet& data) {
    data.validate();
    DataSet out;
    out.X.resize(data.n(), data.p() + 1);
    out.X.leftCols(data.p()) = data.X;
    out.X.col(data.p()).setOnes();
    out.y = data.y;
    if (!data.names.empty()) {
        out.names = data.names;
        out.names.push_back("const");
    }
    return out;
}

void write_dataset_csv(const DataSet& data, const std::string& path) {
    data.validate();
    std::ofstream outfile(path);
    if (!outfile) throw std::invalid_argument("cannot write file '" + path + "'");
    for (Eigen::Index c = 0; c < data.p(); ++c) {
        outfile << (data.names.empty() ? "x" + std::to_string(c + 1) : data.names[c]) << ',';
    }
    outfile << "y\n";
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        for (Eigen::Index c = 0; c < data.p(); ++c)
            outfile << format_double(data.X(i, c), "%.17g") << ',';
        outfile << format_double(data.y[i], "%.17g") << '\n';
    }
}

std::string power_csv_string(const PowerTable& table) {
    std::string out = "scenario,p,a,n,stat,reps,rate,mc_stderr\n";
    for (const auto& row : table.rows) {
        out += std::to_string(row.scenario) + ',' + std::to_string(row.p) + ',' +
               format_double(row.a, "%g") + ',' + std::to_string(row.n) + ',' + row.stat + ',' +
               std::to_string(row.reps) + ',' + format_double(row.rate, "%.6f") + ',' +
               format_double(row.mc_stderr, "%.6f") + '\n';
    }
    return out;
}

void write_power_csv(const PowerTable& table, const std::string& path) {
    std::ofstream outfile(path);
    if (!outfile) throw std::invalid_argument("cannot write file '" + path + "'");
    outfile << power_csv_string(table);
}

void write_power_curves(const PowerTable& table, const std::string& dir) {
    std::filesystem::create_directories(dir);
    // One (a, rate) series per (scenario, p, n, statistic).
    std::map<std::string, std::vector<std::pair<double, double>>> curves;
    for (const auto& row : table.rows) {
        const std::string key = "curve_s" + std::to_string(row.scenario) + "_p" +
                                std::to_string(row.p) + "_n" + std::to_string(row.n) + "_" +
                                row.stat;
        curves[key].emplace_back(row.a, row.rate);
    }
    for (auto& [key, series] : curves) {
        std::sort(series.begin(), series.end());
        std::ofstream outfile(std::filesystem::path(dir) / (key + ".csv"));
        if (!outfile) throw std::invalid_argument("cannot write power curve in '" + dir + "'");
        outfile << "a,rate\n";
        for (const auto& [a, rate] : series)
            outfile << format_double(a, "%g") << ',' << format_double(rate, "%.6f") << '\n';
    }
}

std::string format_power_table(const PowerTable& table) {
    char buf[160];
    std::string out;
    std::snprintf(buf, sizeof(buf), "%8s %3s %6s %6s %-9s %6s %8s %9s %s\n", "scenario", "p",
                  "a", "n", "stat", "reps", "rate", "mc_se", "note");
    out += buf;
    for (const auto& row : table.rows) {
        std::snprintf(buf, sizeof(buf), "%8d %3d %6g %6d %-9s %6d %8.4f %9.4f %s\n",
                      row.scenario, row.p, row.a, row.n, row.stat.c_str(), row.reps, row.rate,
                      row.mc_stderr, row.failed ? "FAILED" : "");
        out += buf;
    }
    return out;
}

std::string format_test_result(const TestResult& result) {
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof(buf), "statistic   : %s\n", result.statistic.c_str());
    out += buf;
    if (result.bandwidth > 0.0) {
        std::snprintf(buf, sizeof(buf), "bandwidth   : %.6g\n", result.bandwidth);
        out += buf;
    }
    std::snprintf(buf, sizeof(buf), "observed    : %.10g\n", result.observed);
    out += buf;
    std::snprintf(buf, sizeof(buf), "bootstrap B : %d (failed %d, nonconverged %d)\n", result.B,
                  result.failed_replicates, result.nonconverged_refits);
    out += buf;
    std::snprintf(buf, sizeof(buf), "p-value     : %.6g\n", result.p_value);
    out += buf;
    std::snprintf(buf, sizeof(buf), "decision    : %s at level %g (law %s, seed %llu)\n",
                  result.reject ? "REJECT" : "fail to reject", result.level,
                  law_name(result.law).c_str(),
                  static_cast<unsigned long long>(result.seed));
    out += buf;
    return out;
}

} // namespace spectest
