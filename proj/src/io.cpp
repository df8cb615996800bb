#include "fda/io.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "fda/errors.hpp"

namespace fda {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_field(const std::string& field, std::size_t line_no, const char* what) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        std::ostringstream msg;
        msg << "line " << line_no << ": bad " << what << " value '" << field << "'";
        throw ParseError(msg.str());
    }
    return value;
}

} // namespace

LoadedDataset load_dataset(const std::string& path, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    {
        const auto header = split_csv_line(line);
        if (header.size() != 3 || header[0] != "subject_id" || header[1] != "t" ||
            header[2] != "y")
            throw ParseError(path + ": header must be subject_id,t,y");
    }

    std::map<std::string, std::vector<std::pair<double, double>>> raw;
    std::size_t line_no = 1, rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) {
            std::ostringstream msg;
            msg << "line " << line_no << ": expected 3 fields, found " << fields.size();
            throw ParseError(msg.str());
        }
        if (fields[0].empty()) {
            std::ostringstream msg;
            msg << "line " << line_no << ": empty subject id";
            throw ParseError(msg.str());
        }
        const double t = parse_field(fields[1], line_no, "t");
        const double y = parse_field(fields[2], line_no, "y");
        raw[fields[0]].emplace_back(t, y);
        ++rows;
    }

    LoadedDataset out;
    out.report.rows = rows;
    double tmin = 0.0, tmax = 0.0;
    bool first = true;
    for (auto& [id, obs] : raw) {
        std::sort(obs.begin(), obs.end());
        for (std::size_t j = 1; j < obs.size(); ++j)
            if (obs[j].first == obs[j - 1].first) {
                std::ostringstream msg;
                msg << "subject " << id << ": duplicate time " << obs[j].first;
                throw DuplicateTimePoint(msg.str());
            }
        if (obs.size() < options.min_points) {
            if (options.drop_below_min) {
                out.report.dropped_subjects.push_back(id);
                continue;
            }
            std::ostringstream msg;
            msg << "subject " << id << " has " << obs.size() << " observations, fewer than "
                << options.min_points << " (pass --drop-below-min to drop such subjects)";
            throw ParseError(msg.str());
        }
        Subject subj;
        subj.id = id;
        subj.times.reserve(obs.size());
        subj.values.reserve(obs.size());
        for (const auto& [t, y] : obs) {
            subj.times.push_back(t);
            subj.values.push_back(y);
        }
        if (first) {
            tmin = subj.times.front();
            tmax = subj.times.back();
            first = false;
        } else {
            tmin = std::min(tmin, subj.times.front());
            tmax = std::max(tmax, subj.times.back());
        }
        out.data.subjects.push_back(std::move(subj));
    }
    if (out.data.subjects.empty())
        throw EmptyAfterFilter(path + ": no subjects remain after filtering");
    out.report.subjects = out.data.subjects.size();

    out.data.a = options.interval_a.value_or(tmin);
    out.data.b = options.interval_b.value_or(tmax);
    if (!(out.data.a < out.data.b))
        throw ParseError(path + ": observation interval is empty");
    validate_dataset(out.data);
    return out;
}

DesignMatrix load_covariates(const std::string& path, const FunctionalDataset& data) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "subject_id")
        throw ParseError(path + ": header must be subject_id,x1,...,xq");
    const std::size_t q = header.size() - 1;

    std::map<std::string, std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != q + 1) {
            std::ostringstream msg;
            msg << "line " << line_no << ": expected " << q + 1 << " fields, found "
                << fields.size();
            throw ParseError(msg.str());
        }
        if (rows.count(fields[0])) {
            std::ostringstream msg;
            msg << "line " << line_no << ": duplicate subject id '" << fields[0] << "'";
            throw ParseError(msg.str());
        }
        std::vector<double> x(q);
        for (std::size_t a = 0; a < q; ++a)
            x[a] = parse_field(fields[a + 1], line_no, header[a + 1].c_str());
        rows.emplace(fields[0], std::move(x));
    }
    if (rows.size() != data.n())
        throw ParseError(path + ": covariate rows do not match the dataset subjects");

    DesignMatrix design;
    design.column_names.assign(header.begin() + 1, header.end());
    design.X = Matrix(data.n(), q);
    for (std::size_t i = 0; i < data.n(); ++i) {
        const auto it = rows.find(data.subjects[i].id);
        if (it == rows.end())
            throw ParseError(path + ": no covariates for subject " + data.subjects[i].id);
        for (std::size_t a = 0; a < q; ++a) design.X(i, a) = it->second[a];
    }
    return design;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void atomic_write_text(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp);
        out << content;
        if (!out) throw Error("short write to " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

void write_report(const TestReport& report, const std::string& path) {
    nlohmann::json j;
    j["statistic"] = report.statistic;
    j["interval"] = {report.interval_lo, report.interval_hi};
    j["eigenvalues"] = report.eigenvalues;
    j["m_hat"] = report.m_hat;
    j["p_values"] = report.p_values;
    j["draws"] = {{"sim", report.draws_sim}, {"boot", report.draws_boot}};
    j["seed"] = report.seed;
    j["config"] = report.config;
    atomic_write_text(path, j.dump(2) + "\n");
}

TestReport read_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
        TestReport report;
        report.statistic = j.at("statistic").get<double>();
        report.interval_lo = j.at("interval").at(0).get<double>();
        report.interval_hi = j.at("interval").at(1).get<double>();
        report.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
        report.m_hat = j.at("m_hat").get<std::size_t>();
        report.p_values = j.at("p_values").get<std::map<std::string, double>>();
        report.draws_sim = j.at("draws").at("sim").get<int>();
        report.draws_boot = j.at("draws").at("boot").get<int>();
        report.seed = j.at("seed").get<std::uint64_t>();
        report.config = j.at("config").get<std::map<std::string, std::string>>();
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_curves_csv(const CurveSet& curves, const std::vector<std::string>& ids,
                      const std::string& path) {
    if (ids.size() != curves.curves.rows())
        throw GridMismatch("write_curves_csv: id count does not match curves");
    std::ostringstream out;
    out << "t";
    for (const auto& id : ids) out << ',' << id;
    out << '\n';
    for (std::size_t g = 0; g < curves.grid.size(); ++g) {
        out << format_double(curves.grid.points[g]);
        for (std::size_t i = 0; i < curves.curves.rows(); ++i)
            out << ',' << format_double(curves.curves(i, g));
        out << '\n';
    }
    atomic_write_text(path, out.str());
}

void write_function_csv(const EvaluationGrid& grid, const std::vector<double>& values,
                        const std::string& value_name, const std::string& path) {
    if (values.size() != grid.size())
        throw GridMismatch("write_function_csv: values do not match the grid");
    std::ostringstream out;
    out << "t," << value_name << '\n';
    for (std::size_t g = 0; g < grid.size(); ++g)
        out << format_double(grid.points[g]) << ',' << format_double(values[g]) << '\n';
    atomic_write_text(path, out.str());
}

void write_matrix_csv(const Matrix& m, const std::string& path) {
    std::ostringstream out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
    atomic_write_text(path, out.str());
}

void write_table_csv(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows,
                     const std::string& path) {
    std::ostringstream out;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c) out << ',';
        out << header[c];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            out << format_double(row[c]);
        }
        out << '\n';
    }
    atomic_write_text(path, out.str());
}

} // namespace fda
