#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "minorb/convergence.hpp"
#include "minorb/dense_operator.hpp"
#include "minorb/diagonal_seq.hpp"
#include "minorb/geodesics.hpp"
#include "minorb/minimality.hpp"

namespace minorb {

/// Floats rendered with 17 significant digits (lossless round trip).
std::string format_float(double v);

nlohmann::json tail_to_json(const TailDescriptor& t);
TailDescriptor tail_from_json(const nlohmann::json& j);

/// Operator-exchange document: {schema, dim, structure_flag, entries as
/// [re, im] row-major, params, tail}. params and tail are optional.
nlohmann::json operator_to_json(
    const DenseOperator& op, const nlohmann::json& params = nlohmann::json(),
    const std::optional<TailDescriptor>& tail = std::nullopt);

DenseOperator operator_from_json(
    const nlohmann::json& j, nlohmann::json* params_out = nullptr,
    std::optional<TailDescriptor>* tail_out = nullptr);

nlohmann::json certificate_to_json(const MinimalityCertificate& c);
nlohmann::json quotient_result_to_json(const QuotientNormResult& r);

nlohmann::json report_to_json(const ConvergenceReport& r);
/// Per-metric table: one row per truncation rank, one column per metric.
std::string report_to_csv(const ConvergenceReport& r);

nlohmann::json curve_to_json(const OrbitCurve& c);
/// One row per sample: t followed by the row-major re/im entry pairs.
std::string curve_to_csv(const OrbitCurve& c);

/// Report file naming convention {experiment_id}_{gamma}_{N}.json.
std::string report_filename(const std::string& experiment_id, double gamma,
                            int N);

/// Writes through a temporary file in the same directory plus rename, so
/// readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

}  // namespace minorb
