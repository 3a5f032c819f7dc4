#include "hdgauss/io.hpp"

#include "hdgauss/errors.hpp"

#include <cctype>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hdgauss {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& field, std::size_t row, std::size_t col) {
    // strtod instead of stod: subnormal values must round-trip, and stod
    // reports their underflow as out_of_range.
    const char* begin = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    while (end && *end != '\0' && std::isspace(static_cast<unsigned char>(*end))) ++end;
    if (end == begin || (end && *end != '\0')) {
        std::ostringstream os;
        os << "CSV: cannot parse number at row " << row << ", column " << col << ": '" << field
           << "'";
        throw ValidationError(os.str());
    }
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

json vec_to_json(const Vec& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Vec vec_from_json(const json& arr) {
    if (!arr.is_array()) throw ValidationError("JSON: expected an array of numbers");
    Vec v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    return v;
}

json diagnostics_to_json(const FitDiagnostics& d) {
    return json{{"k_fdr_mean", d.k_fdr_mean},
                {"threshold_mean", d.threshold_mean},
                {"threshold_mean_raw", d.threshold_mean_raw},
                {"k_fdr_var", d.k_fdr_var},
                {"threshold_var", d.threshold_var},
                {"threshold_var_raw", d.threshold_var_raw},
                {"b_p", d.b_p},
                {"degenerate", d.degenerate},
                {"bp_floor_warning", d.bp_floor_warning}};
}

FitDiagnostics diagnostics_from_json(const json& j) {
    FitDiagnostics d;
    d.k_fdr_mean = j.value("k_fdr_mean", 0);
    d.threshold_mean = j.value("threshold_mean", 0.0);
    d.threshold_mean_raw = j.value("threshold_mean_raw", 0.0);
    d.k_fdr_var = j.value("k_fdr_var", 0);
    d.threshold_var = j.value("threshold_var", 0.0);
    d.threshold_var_raw = j.value("threshold_var_raw", 0.0);
    d.b_p = j.value("b_p", 0.0);
    d.degenerate = j.value("degenerate", false);
    d.bp_floor_warning = j.value("bp_floor_warning", false);
    return d;
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file for reading: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out << content;
    if (!out) throw IoError("failed writing file: " + path);
}

LabeledDataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("CSV: missing header row in " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_csv_line(line);
    if (header.empty() || header.back() != "label") {
        throw ValidationError("CSV: last header column must be 'label'");
    }
    const std::size_t p = header.size() - 1;
    for (std::size_t i = 0; i < p; ++i) {
        if (header[i] != "f" + std::to_string(i)) {
            throw ValidationError("CSV: header column " + std::to_string(i) + " must be f" +
                                  std::to_string(i) + ", got '" + header[i] + "'");
        }
    }

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::size_t row_number = 1;
    while (std::getline(in, line)) {
        ++row_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != p + 1) {
            std::ostringstream os;
            os << "CSV: row " << row_number << " has " << fields.size() << " fields, expected "
               << p + 1;
            throw ValidationError(os.str());
        }
        std::vector<double> row(p);
        for (std::size_t i = 0; i < p; ++i) row[i] = parse_double(fields[i], row_number, i);
        const double label = parse_double(fields[p], row_number, p);
        if (label != 0.0 && label != 1.0) {
            std::ostringstream os;
            os << "CSV: row " << row_number << " label must be 0 or 1, got " << fields[p];
            throw ValidationError(os.str());
        }
        rows.push_back(std::move(row));
        labels.push_back(static_cast<int>(label));
    }

    LabeledDataset data;
    data.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(p));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            data.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    data.labels = std::move(labels);
    return data;
}

void write_dataset_csv(const std::string& path, const LabeledDataset& data) {
    data.validate();
    std::ostringstream os;
    for (Eigen::Index j = 0; j < data.dimension(); ++j) os << "f" << j << ",";
    os << "label\n";
    for (Eigen::Index i = 0; i < data.size(); ++i) {
        for (Eigen::Index j = 0; j < data.dimension(); ++j) {
            os << format_double(data.features(i, j)) << ",";
        }
        os << data.labels[static_cast<std::size_t>(i)] << "\n";
    }
    write_text_file(path, os.str());
}

Mat read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file for reading: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t row_number = 0;
    while (std::getline(in, line)) {
        ++row_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        std::vector<double> row(fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i) {
            row[i] = parse_double(fields[i], row_number, i);
        }
        if (!rows.empty() && rows.front().size() != row.size()) {
            throw ValidationError("matrix CSV: ragged rows in " + path);
        }
        rows.push_back(std::move(row));
    }
    Mat m(static_cast<Eigen::Index>(rows.size()),
          rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

void write_matrix_csv(const std::string& path, const Mat& m) {
    std::ostringstream os;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            os << format_double(m(i, j));
            if (j + 1 < m.cols()) os << ",";
        }
        os << "\n";
    }
    write_text_file(path, os.str());
}

json rule_to_json(const LdaRule& rule) {
    return json{{"kind", "lda"},
                {"normal", vec_to_json(rule.normal)},
                {"center", vec_to_json(rule.center)},
                {"selected", rule.selected},
                {"thresholded", rule.thresholded},
                {"diagnostics", diagnostics_to_json(rule.diagnostics)}};
}

json rule_to_json(const DiagQdaRule& rule) {
    return json{{"kind", "diag_qda"},
                {"mean1", vec_to_json(rule.mean1)},
                {"mean0", vec_to_json(rule.mean0)},
                {"var1", vec_to_json(rule.var1)},
                {"var0", vec_to_json(rule.var0)},
                {"mean_selected", rule.mean_selected},
                {"var_selected", rule.var_selected},
                {"offset", rule.offset},
                {"g_hat", vec_to_json(rule.g_hat)},
                {"a_hat", vec_to_json(rule.a_hat)},
                {"center", vec_to_json(rule.center)},
                {"diagnostics", diagnostics_to_json(rule.diagnostics)}};
}

AnyRule rule_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "lda") {
        LdaRule rule;
        rule.normal = vec_from_json(j.at("normal"));
        rule.center = vec_from_json(j.at("center"));
        rule.selected = j.value("selected", std::vector<int>{});
        rule.thresholded = j.value("thresholded", false);
        rule.diagnostics = diagnostics_from_json(j.value("diagnostics", json::object()));
        if (rule.normal.size() != rule.center.size()) {
            throw ValidationError("rule JSON: normal and center lengths differ");
        }
        return rule;
    }
    if (kind == "diag_qda") {
        DiagQdaRule rule;
        rule.mean1 = vec_from_json(j.at("mean1"));
        rule.mean0 = vec_from_json(j.at("mean0"));
        rule.var1 = vec_from_json(j.at("var1"));
        rule.var0 = vec_from_json(j.at("var0"));
        rule.mean_selected = j.value("mean_selected", std::vector<int>{});
        rule.var_selected = j.value("var_selected", std::vector<int>{});
        rule.offset = j.at("offset").get<double>();
        rule.g_hat = vec_from_json(j.at("g_hat"));
        rule.a_hat = vec_from_json(j.at("a_hat"));
        rule.center = vec_from_json(j.at("center"));
        rule.diagnostics = diagnostics_from_json(j.value("diagnostics", json::object()));
        return rule;
    }
    throw ValidationError("rule JSON: unknown kind '" + kind + "'");
}

json to_json(const RiskReport& report) {
    return json{{"weighted_risk", report.weighted_risk},
                {"excess", report.excess},
                {"learning_error", report.learning_error},
                {"method", to_string(report.method)},
                {"se_weighted", report.se_weighted},
                {"se_excess", report.se_excess},
                {"se_learning", report.se_learning},
                {"n_samples", report.n_samples}};
}

json to_json(const BoundReport& report) {
    return json{{"name", report.name},
                {"value", report.value},
                {"applicable", report.applicable},
                {"side", report.side == BoundSide::upper ? "upper" : "lower"},
                {"vacuous", report.vacuous},
                {"inputs", report.inputs}};
}

ProblemSpec problem_spec_from_json(const json& j) {
    ProblemSpec spec;
    spec.p = j.at("p").get<int>();
    spec.q_sparsity = j.value("q_sparsity", 1.0);
    spec.radius_R = j.value("radius_R", 1.0);
    spec.separation_r = j.value("separation_r", 1.0);
    spec.covariance_kind = covariance_kind_from_string(j.value("covariance_kind", "identity"));
    if (j.contains("diagonal_values")) spec.diagonal_values = vec_from_json(j["diagonal_values"]);
    spec.toeplitz_rho = j.value("toeplitz_rho", 0.5);
    spec.spd_eig_min = j.value("spd_eig_min", 0.5);
    spec.spd_eig_max = j.value("spd_eig_max", 2.0);
    spec.equal_cov = j.value("equal_cov", true);
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.decay_qtilde = j.value("decay_qtilde", 0.0);
    spec.magnitude_jitter = j.value("magnitude_jitter", 0.0);
    return spec;
}

json to_json(const ProblemSpec& spec) {
    json j{{"p", spec.p},
           {"q_sparsity", spec.q_sparsity},
           {"radius_R", spec.radius_R},
           {"separation_r", spec.separation_r},
           {"covariance_kind", to_string(spec.covariance_kind)},
           {"toeplitz_rho", spec.toeplitz_rho},
           {"spd_eig_min", spec.spd_eig_min},
           {"spd_eig_max", spec.spd_eig_max},
           {"equal_cov", spec.equal_cov},
           {"seed", spec.seed},
           {"decay_qtilde", spec.decay_qtilde},
           {"magnitude_jitter", spec.magnitude_jitter}};
    if (spec.diagonal_values.size() > 0) j["diagonal_values"] = vec_to_json(spec.diagonal_values);
    return j;
}

}  // namespace hdgauss
