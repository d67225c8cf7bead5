#include "mixdist/dataset.hpp"

#include "mixdist/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_map>

namespace mixdist {

namespace {

Index column_length(const Column& col)
{
    return std::visit(
        [](const auto& c) -> Index {
            if constexpr (std::is_same_v<std::decay_t<decltype(c)>, NumericColumn>)
                return c.values.size();
            else
                return c.size();
        },
        col);
}

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

// Splits one CSV record. Double-quoted fields may contain commas; "" escapes a quote.
std::vector<std::string> split_record(const std::string& line)
{
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(trim(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    fields.push_back(trim(field));
    return fields;
}

double parse_number(const std::string& cell, std::size_t row, const std::string& column)
{
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    if (!cell.empty() && *begin == '+')
        ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (cell.empty() || ec != std::errc() || ptr != end) {
        std::ostringstream msg;
        msg << "cannot parse numeric value '" << cell << "' at row " << row << ", column '" << column << "'";
        throw Error(msg.str());
    }
    return value;
}

} // namespace

CategoricalColumn CategoricalColumn::from_codes(std::string name, std::vector<int> codes, int q)
{
    CategoricalColumn col{std::move(name), std::move(codes), {}};
    col.levels.reserve(static_cast<std::size_t>(std::max(q, 0)));
    for (int a = 0; a < q; ++a)
        col.levels.push_back(std::to_string(a));
    return col;
}

MixedDataset::MixedDataset(std::vector<Column> columns) : columns_(std::move(columns))
{
    if (columns_.empty())
        throw Error("dataset has no columns");
    rows_ = column_length(columns_.front());
    if (rows_ < 2)
        throw Error("dataset needs at least two rows");
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        if (column_length(columns_[j]) != rows_)
            throw Error("column '" + name(j) + "' has a different number of rows");
        if (const auto* cat = std::get_if<CategoricalColumn>(&columns_[j])) {
            if (cat->q() < 2)
                throw Error("categorical column '" + cat->name + "' has fewer than two levels");
            for (int code : cat->codes)
                if (code < 0 || code >= cat->q())
                    throw Error("categorical column '" + cat->name + "' has a code outside [0, q)");
        }
    }
}

const std::string& MixedDataset::name(std::size_t j) const
{
    return std::visit([](const auto& c) -> const std::string& { return c.name; }, columns_.at(j));
}

bool MixedDataset::is_numeric(std::size_t j) const
{
    return std::holds_alternative<NumericColumn>(columns_.at(j));
}

const NumericColumn& MixedDataset::numeric(std::size_t j) const
{
    if (!is_numeric(j))
        throw Error("column '" + name(j) + "' is not numeric");
    return std::get<NumericColumn>(columns_[j]);
}

const CategoricalColumn& MixedDataset::categorical(std::size_t j) const
{
    if (is_numeric(j))
        throw Error("column '" + name(j) + "' is not categorical");
    return std::get<CategoricalColumn>(columns_[j]);
}

std::vector<std::size_t> MixedDataset::numeric_indices() const
{
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < cols(); ++j)
        if (is_numeric(j))
            out.push_back(j);
    return out;
}

std::vector<std::size_t> MixedDataset::categorical_indices() const
{
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < cols(); ++j)
        if (!is_numeric(j))
            out.push_back(j);
    return out;
}

Eigen::MatrixXd MixedDataset::numeric_block() const
{
    const auto idx = numeric_indices();
    Eigen::MatrixXd block(rows_, static_cast<Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k)
        block.col(static_cast<Index>(k)) = numeric(idx[k]).values;
    return block;
}

MixedDataset MixedDataset::without(std::size_t j) const
{
    if (j >= cols())
        throw Error("column index out of range");
    std::vector<Column> rest;
    rest.reserve(cols() - 1);
    for (std::size_t k = 0; k < cols(); ++k)
        if (k != j)
            rest.push_back(columns_[k]);
    return MixedDataset(std::move(rest));
}

MixedDataset MixedDataset::with_column(std::size_t j, Column replacement) const
{
    auto copy = columns_;
    copy.at(j) = std::move(replacement);
    return MixedDataset(std::move(copy));
}

MixedDataset parse_csv(std::istream& in, const Schema& schema)
{
    if (schema.empty())
        throw Error("schema is empty");
    std::string line;
    if (!std::getline(in, line))
        throw Error("CSV input is empty (missing header row)");
    const auto header = split_record(line);

    std::vector<std::size_t> source(schema.size());
    for (std::size_t s = 0; s < schema.size(); ++s) {
        const auto it = std::find(header.begin(), header.end(), schema[s].name);
        if (it == header.end())
            throw Error("schema column '" + schema[s].name + "' not found in CSV header");
        source[s] = static_cast<std::size_t>(it - header.begin());
    }

    std::vector<std::vector<double>> numbers(schema.size());
    std::vector<std::vector<int>> codes(schema.size());
    std::vector<std::vector<std::string>> levels(schema.size());
    std::vector<std::unordered_map<std::string, int>> lookup(schema.size());

    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty())
            continue;
        ++row;
        const auto fields = split_record(line);
        if (fields.size() != header.size()) {
            std::ostringstream msg;
            msg << "row " << row << " has " << fields.size() << " fields, header has " << header.size();
            throw Error(msg.str());
        }
        for (std::size_t s = 0; s < schema.size(); ++s) {
            const std::string& cell = fields[source[s]];
            if (cell.empty()) {
                std::ostringstream msg;
                msg << "missing value at row " << row << ", column '" << schema[s].name << "'";
                throw Error(msg.str());
            }
            if (schema[s].type == ColumnType::numeric) {
                numbers[s].push_back(parse_number(cell, row, schema[s].name));
            } else {
                auto [it, inserted] = lookup[s].emplace(cell, static_cast<int>(levels[s].size()));
                if (inserted)
                    levels[s].push_back(cell);
                codes[s].push_back(it->second);
            }
        }
    }
    if (row < 2)
        throw Error("CSV must contain at least two data rows");

    std::vector<Column> columns;
    for (std::size_t s = 0; s < schema.size(); ++s) {
        if (schema[s].type == ColumnType::numeric) {
            columns.emplace_back(NumericColumn{
                schema[s].name, Eigen::Map<const Eigen::VectorXd>(numbers[s].data(), static_cast<Index>(numbers[s].size()))});
        } else {
            if (levels[s].size() < 2)
                throw Error("categorical column '" + schema[s].name + "' has a single observed level (q=1)");
            columns.emplace_back(CategoricalColumn{schema[s].name, std::move(codes[s]), std::move(levels[s])});
        }
    }
    return MixedDataset(std::move(columns));
}

MixedDataset load_csv(const std::filesystem::path& path, const Schema& schema)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open CSV file '" + path.string() + "'");
    return parse_csv(in, schema);
}

Eigen::MatrixXd indicator(const CategoricalColumn& col)
{
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(col.size(), col.q());
    for (Index i = 0; i < col.size(); ++i)
        z(i, col.codes[static_cast<std::size_t>(i)]) = 1.0;
    return z;
}

Eigen::VectorXd category_counts(const CategoricalColumn& col)
{
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(col.q());
    for (int code : col.codes)
        counts(code) += 1.0;
    return counts;
}

Eigen::VectorXd proportions(const CategoricalColumn& col, ZeroCounts mode)
{
    const Eigen::VectorXd counts = category_counts(col);
    if (mode == ZeroCounts::reject) {
        for (Index a = 0; a < counts.size(); ++a)
            if (counts(a) == 0.0)
                throw Error("level '" + col.levels[static_cast<std::size_t>(a)] + "' of column '" + col.name +
                            "' is never observed");
    }
    return counts / static_cast<double>(col.size());
}

CategoricalColumn discretize(const NumericColumn& col, int q)
{
    if (q < 2)
        throw Error("discretize needs at least two intervals");
    if (col.values.size() == 0)
        throw Error("cannot discretize an empty column");
    const double lo = col.values.minCoeff();
    const double hi = col.values.maxCoeff();
    if (!(hi > lo))
        throw Error("cannot discretize constant column '" + col.name + "'");
    const double width = (hi - lo) / q;
    std::vector<int> codes(static_cast<std::size_t>(col.values.size()));
    for (Index i = 0; i < col.values.size(); ++i) {
        int bin = static_cast<int>(std::floor((col.values(i) - lo) / width));
        codes[static_cast<std::size_t>(i)] = std::clamp(bin, 0, q - 1);
    }
    return CategoricalColumn::from_codes(col.name, std::move(codes), q);
}

CategoricalColumn drop_unused_levels(const CategoricalColumn& col)
{
    const Eigen::VectorXd counts = category_counts(col);
    std::vector<int> remap(static_cast<std::size_t>(col.q()), -1);
    CategoricalColumn out{col.name, {}, {}};
    for (int a = 0; a < col.q(); ++a) {
        if (counts(a) > 0) {
            remap[static_cast<std::size_t>(a)] = out.q();
            out.levels.push_back(col.levels[static_cast<std::size_t>(a)]);
        }
    }
    out.codes.reserve(col.codes.size());
    for (int code : col.codes)
        out.codes.push_back(remap[static_cast<std::size_t>(code)]);
    return out;
}

} // namespace mixdist
