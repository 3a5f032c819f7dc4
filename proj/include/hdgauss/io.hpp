#pragma once

#include "hdgauss/classifiers.hpp"
#include "hdgauss/risk.hpp"
#include "hdgauss/synth.hpp"

#include <json.hpp>

#include <string>
#include <variant>

namespace hdgauss {

using json = nlohmann::json;

/// CSV schema: header f0..f{p-1} plus a final `label` column with values 0/1.
LabeledDataset read_dataset_csv(const std::string& path);
void write_dataset_csv(const std::string& path, const LabeledDataset& data);

/// Square matrix as headerless CSV.
Mat read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Mat& m);

using AnyRule = std::variant<LdaRule, DiagQdaRule>;

json rule_to_json(const LdaRule& rule);
json rule_to_json(const DiagQdaRule& rule);
AnyRule rule_from_json(const json& j);

json to_json(const RiskReport& report);
json to_json(const BoundReport& report);

ProblemSpec problem_spec_from_json(const json& j);
json to_json(const ProblemSpec& spec);

/// Reads a whole file; throws IoError on failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hdgauss
