#include "mixdist/io.hpp"

#include "mixdist/error.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

namespace mixdist {

namespace {

std::vector<double> parse_row(const std::string& line)
{
    std::vector<double> values;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(cell, &used));
        } catch (const std::exception&) {
            throw Error("cannot parse matrix entry '" + cell + "'");
        }
    }
    return values;
}

std::ostream& precise(std::ostream& out)
{
    out << std::setprecision(output_precision);
    return out;
}

nlohmann::ordered_json report_json(const ImportanceReport& report)
{
    nlohmann::ordered_json variables = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < report.variables.size(); ++j)
        variables.push_back({{"variable", report.variables[j]},
                             {"absolute", report.absolute(static_cast<Eigen::Index>(j))},
                             {"relative", report.relative(static_cast<Eigen::Index>(j))}});
    return {{"metric", std::string(to_string(report.metric))}, {"variables", variables}};
}

} // namespace

void write_square_csv(std::ostream& out, const Eigen::Ref<const Eigen::MatrixXd>& d)
{
    precise(out);
    for (Eigen::Index j = 0; j < d.cols(); ++j)
        out << (j ? "," : "") << j;
    out << '\n';
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
        for (Eigen::Index j = 0; j < d.cols(); ++j)
            out << (j ? "," : "") << d(i, j);
        out << '\n';
    }
}

Eigen::MatrixXd read_square_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw Error("distance CSV is empty");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line))
        if (!line.empty())
            rows.push_back(parse_row(line));
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd d(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != n)
            throw Error("distance CSV is not square");
        for (Eigen::Index j = 0; j < n; ++j)
            d(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return d;
}

void write_condensed_csv(std::ostream& out, const Eigen::Ref<const Eigen::MatrixXd>& d)
{
    precise(out);
    out << "n," << d.rows() << '\n';
    for (Eigen::Index i = 0; i + 1 < d.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < d.cols(); ++j)
            out << (j > i + 1 ? "," : "") << d(i, j);
        out << '\n';
    }
}

Eigen::MatrixXd read_condensed_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line.rfind("n,", 0) != 0)
        throw Error("condensed distance CSV must start with 'n,<size>'");
    const auto n = static_cast<Eigen::Index>(std::stol(line.substr(2)));
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        if (!std::getline(in, line))
            throw Error("condensed distance CSV is truncated");
        const auto row = parse_row(line);
        if (static_cast<Eigen::Index>(row.size()) != n - i - 1)
            throw Error("condensed distance CSV row has the wrong length");
        for (Eigen::Index j = i + 1; j < n; ++j)
            d(i, j) = d(j, i) = row[static_cast<std::size_t>(j - i - 1)];
    }
    return d;
}

std::string distance_summary_json(const DistanceMatrix& d, const std::string& method)
{
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (const auto& t : d.terms) {
        nlohmann::ordered_json entry = {{"name", t.name}, {"type", t.numeric ? "numeric" : "categorical"}, {"kind", t.kind}};
        if (d.additive) {
            entry["weight"] = t.weight;
            entry["mean_pair_distance"] = t.raw_mean;
            entry["weighted_mean_pair_distance"] = t.weight * t.raw_mean;
        } else if (t.kind == "hennig_liao" && !t.numeric) {
            entry["eta"] = t.weight;
        }
        terms.push_back(entry);
    }
    nlohmann::ordered_json doc = {{"method", method},
                                  {"n", d.values.rows()},
                                  {"additive", d.additive},
                                  {"mean_pair_distance", mean_pair_distance(d.values)},
                                  {"terms", terms}};
    return doc.dump(2) + "\n";
}

void write_coordinates_csv(std::ostream& out, const Configuration& layout)
{
    precise(out);
    for (Eigen::Index k = 0; k < layout.coords.cols(); ++k)
        out << (k ? "," : "") << "dim" << k + 1;
    out << '\n';
    for (Eigen::Index i = 0; i < layout.coords.rows(); ++i) {
        for (Eigen::Index k = 0; k < layout.coords.cols(); ++k)
            out << (k ? "," : "") << layout.coords(i, k);
        out << '\n';
    }
}

std::string mds_report_json(const Configuration& layout)
{
    std::vector<double> top(layout.eigenvalues.data(), layout.eigenvalues.data() + layout.eigenvalues.size());
    Eigen::Index negatives = 0;
    for (Eigen::Index i = 0; i < layout.spectrum.size(); ++i)
        negatives += layout.spectrum(i) < 0.0 && -layout.spectrum(i) > 1e-12 * std::abs(layout.spectrum(0));
    const nlohmann::ordered_json doc = {{"dimension", layout.coords.cols()},
                                        {"eigenvalues", top},
                                        {"positive_used", layout.positive_used},
                                        {"padded", layout.padded},
                                        {"negative_eigenvalues", negatives},
                                        {"negative_mass", layout.negative_mass}};
    return doc.dump(2) + "\n";
}

void write_importance_csv(std::ostream& out, std::span<const ImportanceReport> reports)
{
    precise(out);
    out << "variable,absolute,relative,metric\n";
    for (const auto& report : reports)
        for (std::size_t j = 0; j < report.variables.size(); ++j)
            out << report.variables[j] << ',' << report.absolute(static_cast<Eigen::Index>(j)) << ','
                << report.relative(static_cast<Eigen::Index>(j)) << ',' << to_string(report.metric) << '\n';
}

std::string importance_json(std::span<const ImportanceReport> reports, const std::string& method)
{
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& report : reports)
        list.push_back(report_json(report));
    return nlohmann::ordered_json{{"method", method}, {"reports", list}}.dump(2) + "\n";
}

void write_scaling_means_csv(std::ostream& out, std::span<const ScalingMeanCell> cells)
{
    precise(out);
    out << "distribution,n,replications,sd,range,robust_range\n";
    for (const auto& c : cells)
        out << to_string(c.distribution) << ',' << c.n << ',' << c.replications << ',' << c.sd << ',' << c.range << ','
            << c.robust_range << '\n';
}

void write_uniform_profile_csv(std::ostream& out, int q, double n, std::span<const UniformProfileRow> rows)
{
    precise(out);
    out << "q,n,dissimilarity,label,delta_multiple,expected\n";
    for (const auto& r : rows)
        out << q << ',' << n << ',' << to_string(r.kind) << ",\"" << r.label << "\"," << r.multiple_of_matching << ','
            << r.expected << '\n';
}

void write_skew_csv_header(std::ostream& out)
{
    out << "q,dissimilarity,p1,expected\n";
}

void write_skew_csv_rows(std::ostream& out, int q, Dissimilarity kind, std::span<const SkewPoint> points)
{
    precise(out);
    for (const auto& pt : points)
        out << q << ',' << to_string(kind) << ',' << pt.p1 << ',' << pt.expected << '\n';
}

void write_effects_csv(std::ostream& out, std::span<const EffectsRecord> records)
{
    precise(out);
    out << "replication,variant,item,metric,value\n";
    for (const auto& r : records) {
        out << r.replication << ',' << to_string(r.variant) << ',' << r.variable << ',' << to_string(r.metric)
            << "_absolute," << r.absolute << '\n';
        out << r.replication << ',' << to_string(r.variant) << ',' << r.variable << ',' << to_string(r.metric)
            << "_relative," << r.relative << '\n';
    }
}

void write_retrieval_csv(std::ostream& out, std::span<const RetrievalRecord> records)
{
    precise(out);
    out << "replication,variant,item,metric,value\n";
    for (const auto& r : records)
        out << r.replication << ',' << to_string(r.variant) << ",q=" << r.q << ",alienation," << r.alienation << '\n';
}

void write_file(const std::filesystem::path& path, const std::string& contents)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out << contents;
    if (!out)
        throw Error("failed writing '" + path.string() + "'");
}

} // namespace mixdist
