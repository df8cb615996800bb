#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fda/flm.hpp"
#include "fda/smoothing.hpp"

namespace fda {

struct LoadOptions {
    std::size_t min_points = 1;
    bool drop_below_min = false; // false: subjects below min_points are an error
    std::optional<double> interval_a;
    std::optional<double> interval_b;
};

struct IngestionReport {
    std::size_t rows = 0;
    std::size_t subjects = 0;
    std::vector<std::string> dropped_subjects;
};

struct LoadedDataset {
    FunctionalDataset data;
    IngestionReport report;
};

// Long-format CSV with header subject_id,t,y. Rows may arrive in any order;
// subjects are sorted by id and observations by time, so the result does not
// depend on row order. Non-finite or malformed fields raise ParseError with
// the line number; equal times within a subject raise DuplicateTimePoint.
LoadedDataset load_dataset(const std::string& path, const LoadOptions& options = {});

// CSV with header subject_id,x1,...,xq; rows are matched to the dataset's
// subjects by id (every subject exactly once).
DesignMatrix load_covariates(const std::string& path, const FunctionalDataset& data);

// Test report serialized to JSON; numbers round-trip exactly.
struct TestReport {
    double statistic = 0.0;
    double interval_lo = 0.0;
    double interval_hi = 0.0;
    std::vector<double> eigenvalues;
    std::size_t m_hat = 0;
    std::map<std::string, double> p_values; // keys: chi2, sim, boot
    int draws_sim = 0;
    int draws_boot = 0;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> config; // echo of the run configuration
};

void write_report(const TestReport& report, const std::string& path);
TestReport read_report(const std::string& path);

// All writers go through a temp file + rename, so readers never observe a
// partially written file. Numbers are printed with 17 significant digits.
void atomic_write_text(const std::string& path, const std::string& content);

std::string format_double(double v);

void write_curves_csv(const CurveSet& curves, const std::vector<std::string>& ids,
                      const std::string& path);
void write_function_csv(const EvaluationGrid& grid, const std::vector<double>& values,
                        const std::string& value_name, const std::string& path);
void write_matrix_csv(const Matrix& m, const std::string& path);
void write_table_csv(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows,
                     const std::string& path);

} // namespace fda
