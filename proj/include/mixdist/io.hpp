#pragma once

#include "mixdist/analysis.hpp"
#include "mixdist/distance.hpp"
#include "mixdist/expected.hpp"
#include "mixdist/simulation.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mixdist {

/// Significant digits used for every numeric output.
inline constexpr int output_precision = 12;

/// n x n matrix with a header row of row indices 0..n-1.
void write_square_csv(std::ostream& out, const Eigen::Ref<const Eigen::MatrixXd>& d);
Eigen::MatrixXd read_square_csv(std::istream& in);

/// First line "n,<n>", then for each row i < n - 1 the entries d(i, j), j > i.
void write_condensed_csv(std::ostream& out, const Eigen::Ref<const Eigen::MatrixXd>& d);
Eigen::MatrixXd read_condensed_csv(std::istream& in);

/// Per-term weights and mean pair distances of a distance matrix, as JSON.
std::string distance_summary_json(const DistanceMatrix& d, const std::string& method);

/// Coordinates with header dim1..dimk.
void write_coordinates_csv(std::ostream& out, const Configuration& layout);
std::string mds_report_json(const Configuration& layout);

/// Columns: variable,absolute,relative,metric.
void write_importance_csv(std::ostream& out, std::span<const ImportanceReport> reports);
std::string importance_json(std::span<const ImportanceReport> reports, const std::string& method);

void write_scaling_means_csv(std::ostream& out, std::span<const ScalingMeanCell> cells);
void write_uniform_profile_csv(std::ostream& out, int q, double n, std::span<const UniformProfileRow> rows);
/// Long format: q,dissimilarity,p1,expected.
void write_skew_csv_header(std::ostream& out);
void write_skew_csv_rows(std::ostream& out, int q, Dissimilarity kind, std::span<const SkewPoint> points);

/// Tidy simulation output: replication,variant,item,metric,value.
void write_effects_csv(std::ostream& out, std::span<const EffectsRecord> records);
void write_retrieval_csv(std::ostream& out, std::span<const RetrievalRecord> records);

void write_file(const std::filesystem::path& path, const std::string& contents);

} // namespace mixdist
