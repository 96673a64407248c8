// Delimited-table input, column standardization, the Auto MPG encoding, and
// text/CSV output for test results and power tables.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "spectest/bootstrap.hpp"
#include "spectest/dataset.hpp"
#include "spectest/simulation.hpp"

namespace spectest {

/// Raw delimited table: header names plus rows of string cells.
struct RawTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

/// Reads a comma- or whitespace-delimited file with a header row.  The
/// delimiter is detected per file.  Rows longer than the header have their
/// surplus cells folded into the last column (free-text trailing fields);
/// shorter rows are padded with empty cells.
RawTable read_table(const std::string& path);

struct ColumnSchema {
    std::string response;
    std::vector<std::string> predictors;  ///< empty = every non-response column
};

struct LoadReport {
    int dropped_rows = 0;  ///< rows discarded for unparseable/missing values
};

/// Builds a DataSet from the named columns.  Rows whose selected cells fail
/// to parse as numbers are dropped and counted.  Missing columns and empty
/// results throw std::invalid_argument naming the offender.
DataSet load_csv(const std::string& path, const ColumnSchema& schema,
                 LoadReport* report = nullptr);

struct StandardizeOptions {
    bool include_response = false;
    std::vector<std::string> skip;  ///< predictor columns left untouched (e.g. dummies)
};

/// Centers and scales each predictor column by its mean and unbiased standard
/// deviation.  Zero-variance columns throw, naming the column.
DataSet standardize(const DataSet& data, const StandardizeOptions& opts = {});

/// The Auto MPG design: predictors (model_year, acceleration, weight,
/// horsepower, displacement, cylinders) standardized, plus indicator columns
/// for American and European origin (Japanese as reference); response mpg.
/// Rows with missing horsepower ("?") are dropped and counted.
DataSet encode_autompg(const RawTable& raw, LoadReport* report = nullptr);

/// read_table + encode_autompg.  Accepts the headerless UCI file layout:
/// when no header is present the canonical column names are assumed.
DataSet load_autompg(const std::string& path, LoadReport* report = nullptr);

/// Appends a constant-1 column named "const".  Pairwise predictor distances
/// are unchanged, so projection statistics are unaffected; only the fit
/// gains an intercept.
DataSet with_intercept(const DataSet& data);

/// Round-trippable CSV: header from names, values at full precision.
void write_dataset_csv(const DataSet& data, const std::string& path);

// --- result rendering -------------------------------------------------------

/// Power table CSV with header scenario,p,a,n,stat,reps,rate,mc_stderr.
/// Deterministic formatting; timing fields are deliberately not serialized.
std::string power_csv_string(const PowerTable& table);
void write_power_csv(const PowerTable& table, const std::string& path);

/// One (a, rate) CSV per (scenario, p, n, statistic) combination, for power
/// curves; files are named curve_s<id>_p<p>_n<n>_<stat>.csv under dir.
void write_power_curves(const PowerTable& table, const std::string& dir);

/// Fixed-width console rendering.
std::string format_power_table(const PowerTable& table);
std::string format_test_result(const TestResult& result);

} // namespace spectest
