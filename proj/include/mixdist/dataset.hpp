#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace mixdist {

using Index = Eigen::Index;

struct NumericColumn {
    std::string name;
    Eigen::VectorXd values;
};

/// Coded categorical column. Codes index into `levels`; q = levels.size().
struct CategoricalColumn {
    std::string name;
    std::vector<int> codes;
    std::vector<std::string> levels;

    int q() const { return static_cast<int>(levels.size()); }
    Index size() const { return static_cast<Index>(codes.size()); }

    /// Builds a column with levels labelled "0", "1", ..., "q-1".
    static CategoricalColumn from_codes(std::string name, std::vector<int> codes, int q);
};

using Column = std::variant<NumericColumn, CategoricalColumn>;

enum class ColumnType { numeric, categorical };

struct SchemaEntry {
    std::string name;
    ColumnType type;
};
using Schema = std::vector<SchemaEntry>;

/// Column-typed table, immutable after construction. The constructor enforces
/// equal column lengths, at least two rows, codes inside [0, q) and q >= 2.
class MixedDataset {
public:
    explicit MixedDataset(std::vector<Column> columns);

    Index rows() const { return rows_; }
    std::size_t cols() const { return columns_.size(); }

    const Column& column(std::size_t j) const { return columns_.at(j); }
    const std::string& name(std::size_t j) const;
    bool is_numeric(std::size_t j) const;
    const NumericColumn& numeric(std::size_t j) const;
    const CategoricalColumn& categorical(std::size_t j) const;

    std::vector<std::size_t> numeric_indices() const;
    std::vector<std::size_t> categorical_indices() const;

    /// n x p_n matrix of the numeric columns in dataset order.
    Eigen::MatrixXd numeric_block() const;

    MixedDataset without(std::size_t j) const;
    MixedDataset with_column(std::size_t j, Column replacement) const;

    const std::vector<Column>& columns() const { return columns_; }

private:
    std::vector<Column> columns_;
    Index rows_ = 0;
};

/// Parses a comma separated file with a header row. Columns are taken in
/// schema order; header columns not named in the schema are ignored.
/// Categorical levels are coded by first appearance.
MixedDataset load_csv(const std::filesystem::path& path, const Schema& schema);
MixedDataset parse_csv(std::istream& in, const Schema& schema);

/// One-hot matrix Z (n x q): Z(i, a) = 1 iff code_i == a.
Eigen::MatrixXd indicator(const CategoricalColumn& col);

Eigen::VectorXd category_counts(const CategoricalColumn& col);

enum class ZeroCounts { reject, allow };

/// Observed proportions n_a / n. In reject mode a level with no observations
/// raises Error.
Eigen::VectorXd proportions(const CategoricalColumn& col, ZeroCounts mode = ZeroCounts::reject);

/// Equal-width binning of [min, max] into q intervals, left-closed and
/// right-open except the last, which also holds the maximum.
CategoricalColumn discretize(const NumericColumn& col, int q);

/// Recodes a column so that only observed levels remain, keeping level order.
CategoricalColumn drop_unused_levels(const CategoricalColumn& col);

} // namespace mixdist
