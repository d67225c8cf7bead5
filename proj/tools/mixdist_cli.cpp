#include "mixdist/mixdist.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace mixdist;

namespace {

struct CommonOptions {
    std::string config;
    std::string input;
    std::string schema;
    std::string variant;
    std::string weights;
    std::string scaling;
    std::string dissimilarity;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string out;
};

struct RunConfig {
    std::optional<MixedDataset> data;
    std::optional<DistanceMethod> method;
    fs::path out = ".";
};

ColumnType parse_column_type(const std::string& text)
{
    if (text == "num" || text == "numeric")
        return ColumnType::numeric;
    if (text == "cat" || text == "categorical")
        return ColumnType::categorical;
    throw Error("unknown column type '" + text + "' (use num|numeric|cat|categorical)");
}

/// "name:num,other:cat"
Schema parse_schema_string(const std::string& text)
{
    Schema schema;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.rfind(':');
        if (colon == std::string::npos || colon == 0)
            throw Error("schema entry '" + item + "' must look like name:num or name:cat");
        schema.push_back({item.substr(0, colon), parse_column_type(item.substr(colon + 1))});
    }
    if (schema.empty())
        throw Error("schema is empty");
    return schema;
}

Schema parse_schema_json(const json& node)
{
    if (node.is_string())
        return parse_schema_string(node.get<std::string>());
    Schema schema;
    if (node.is_object()) {
        for (const auto& [name, type] : node.items())
            schema.push_back({name, parse_column_type(type.get<std::string>())});
    } else if (node.is_array()) {
        for (const auto& entry : node)
            schema.push_back({entry.at("name").get<std::string>(), parse_column_type(entry.at("type").get<std::string>())});
    } else {
        throw Error("config 'schema' must be a string, an object or an array");
    }
    if (schema.empty())
        throw Error("schema is empty");
    return schema;
}

json read_config_file(const std::string& path)
{
    if (path.empty())
        return json::object();
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error("config file '" + path + "' is not valid JSON: " + e.what());
    }
}

template <typename T, typename Parse>
std::map<std::string, T> parse_name_map(const json& node, Parse parse)
{
    std::map<std::string, T> out;
    for (const auto& [name, value] : node.items())
        out[name] = parse(value.template get<std::string>());
    return out;
}

std::string pick(const std::string& flag, const json& file, const char* key)
{
    if (!flag.empty())
        return flag;
    if (file.contains(key))
        return file.at(key).get<std::string>();
    return {};
}

bool has_custom_keys(const json& file)
{
    for (const char* key : {"numeric_scaling", "categorical_dissimilarity", "scaling_overrides",
                            "dissimilarity_overrides", "distributions", "fixed_weights"})
        if (file.contains(key))
            return true;
    return false;
}

DistanceMethod build_method(const CommonOptions& opts, const json& file)
{
    const std::string variant = pick(opts.variant, file, "variant");
    const std::string weights = pick(opts.weights, file, "weights");
    const bool custom_flags = !opts.scaling.empty() || !opts.dissimilarity.empty();

    if (!variant.empty() && variant != "custom") {
        const Variant preset = parse_variant(variant);
        if (weights.empty() && !custom_flags && !has_custom_keys(file))
            return DistanceMethod(preset);
        if (preset == Variant::naive || preset == Variant::hennig_liao)
            throw Error("variant '" + variant + "' is Euclidean and takes no weight or per-variable settings");
    }

    DistanceConfig config;
    if (!variant.empty() && variant != "custom")
        config = DistanceMethod(parse_variant(variant)).config();
    if (file.contains("numeric_scaling"))
        config.numeric_scaling = parse_scaling(file.at("numeric_scaling").get<std::string>());
    if (file.contains("categorical_dissimilarity"))
        config.categorical_dissimilarity = parse_dissimilarity(file.at("categorical_dissimilarity").get<std::string>());
    if (!opts.scaling.empty())
        config.numeric_scaling = parse_scaling(opts.scaling);
    if (!opts.dissimilarity.empty())
        config.categorical_dissimilarity = parse_dissimilarity(opts.dissimilarity);
    if (file.contains("scaling_overrides"))
        config.scaling_overrides = parse_name_map<Scaling>(file.at("scaling_overrides"), parse_scaling);
    if (file.contains("dissimilarity_overrides"))
        config.dissimilarity_overrides =
            parse_name_map<Dissimilarity>(file.at("dissimilarity_overrides"), parse_dissimilarity);
    if (file.contains("distributions"))
        config.distributions = parse_name_map<NumericDistribution>(file.at("distributions"), parse_distribution);
    if (file.contains("fixed_weights")) {
        std::map<std::string, double> fixed;
        for (const auto& [name, value] : file.at("fixed_weights").items())
            fixed[name] = value.get<double>();
        config.fixed_weights = fixed;
    }
    if (file.contains("hl_phi"))
        config.hl_phi = file.at("hl_phi").get<double>();
    if (file.contains("kl_epsilon"))
        config.kl_epsilon = file.at("kl_epsilon").get<double>();
    if (!weights.empty())
        config.weights = parse_weight_mode(weights);
    return DistanceMethod(config);
}

RunConfig resolve(const CommonOptions& opts, bool need_data)
{
    const json file = read_config_file(opts.config);
    RunConfig run;
    const std::string out = pick(opts.out, file, "out");
    if (!out.empty())
        run.out = out;
    if (opts.threads == 0 && file.contains("threads"))
        set_max_threads(file.at("threads").get<unsigned>());
    else
        set_max_threads(opts.threads);

    const std::string input = pick(opts.input, file, "input");
    if (input.empty()) {
        if (need_data)
            throw Error("no input: pass --input <csv> or set 'input' in the config file");
        return run;
    }
    Schema schema;
    if (!opts.schema.empty())
        schema = parse_schema_string(opts.schema);
    else if (file.contains("schema"))
        schema = parse_schema_json(file.at("schema"));
    else
        throw Error("no schema: pass --schema name:num,other:cat or set 'schema' in the config file");
    run.data = load_csv(input, schema);
    run.method = build_method(opts, file);
    if (const auto config = run.method->variant() ? std::optional<DistanceConfig>{} : run.method->config())
        config->validate(*run.data);
    return run;
}

void add_common(CLI::App* cmd, CommonOptions& opts)
{
    cmd->add_option("--config", opts.config, "JSON run configuration; flags override its values");
    cmd->add_option("--input", opts.input, "CSV file with a header row");
    cmd->add_option("--schema", opts.schema, "column types, e.g. age:num,sex:cat");
    cmd->add_option("--variant", opts.variant, "preset name or short label, or 'custom'");
    cmd->add_option("--weights", opts.weights, "none|empirical|theoretical");
    cmd->add_option("--scaling", opts.scaling, "numeric scaling for a custom config: sd|range|robust_range|pc");
    cmd->add_option("--dissimilarity", opts.dissimilarity, "category dissimilarity for a custom config");
    cmd->add_option("--seed", opts.seed, "root random seed");
    cmd->add_option("--threads", opts.threads, "worker threads (0 = all cores)");
    cmd->add_option("--out", opts.out, "output directory");
}

fs::path prepare_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
    return dir;
}

/// Writes to the file, or to stdout when the path is empty or "-".
void emit(const std::string& path, const std::string& contents)
{
    if (path.empty() || path == "-")
        std::cout << contents;
    else
        write_file(path, contents);
}

void cmd_dist(const CommonOptions& opts, const std::string& format)
{
    const RunConfig run = resolve(opts, true);
    const DistanceMatrix d = run.method->compute(*run.data);
    const fs::path dir = prepare_dir(run.out);
    std::ostringstream csv;
    if (format == "condensed")
        write_condensed_csv(csv, d.values);
    else
        write_square_csv(csv, d.values);
    write_file(dir / "distances.csv", csv.str());
    write_file(dir / "summary.json", distance_summary_json(d, run.method->label()));
}

void cmd_mds(const CommonOptions& opts, const std::string& distances, int dims)
{
    const bool from_matrix = !distances.empty();
    const RunConfig run = resolve(opts, !from_matrix);
    Eigen::MatrixXd d;
    if (from_matrix) {
        std::ifstream in(distances);
        if (!in)
            throw Error("cannot open distance file '" + distances + "'");
        d = read_square_csv(in);
    } else {
        d = run.method->compute(*run.data).values;
    }
    const Configuration layout = classical_mds(d, dims);
    const double positive_mass = layout.spectrum.cwiseMax(0.0).sum();
    if (layout.negative_mass > 1e-9 * positive_mass)
        std::cerr << "warning: " << layout.negative_mass
                  << " of eigenvalue mass is negative, the distances are not Euclidean; negative eigenvalues were dropped\n";
    if (layout.padded)
        std::cerr << "warning: only " << layout.positive_used << " positive eigenvalues, coordinates padded with zeros\n";
    const fs::path dir = prepare_dir(run.out);
    std::ostringstream csv;
    write_coordinates_csv(csv, layout);
    write_file(dir / "coordinates.csv", csv.str());
    write_file(dir / "eigenvalues.json", mds_report_json(layout));
}

void cmd_importance(const CommonOptions& opts, const std::string& metric, int dims)
{
    const RunConfig run = resolve(opts, true);
    std::vector<ImportanceReport> reports;
    if (metric == "both") {
        LooImportance loo = loo_importance(*run.data, *run.method, dims);
        reports = {std::move(loo.distance), std::move(loo.mds)};
    } else if (parse_importance_metric(metric) == ImportanceMetric::mean_abs_diff) {
        reports = {loo_distance_importance(*run.data, *run.method)};
    } else {
        reports = {loo_mds_importance(*run.data, *run.method, dims)};
    }
    const fs::path dir = prepare_dir(run.out);
    std::ostringstream csv;
    write_importance_csv(csv, reports);
    write_file(dir / "importance.csv", csv.str());
    write_file(dir / "importance.json", importance_json(reports, run.method->label()));
}

struct TableOptions {
    std::string which = "uniform";
    std::vector<int> q;
    double n = 160.0;
    std::vector<long> sizes = {500};
    int replications = 200;
    double phi = default_hl_phi;
    double kl_epsilon = default_kl_epsilon;
};

void cmd_tables(const CommonOptions& opts, const TableOptions& t)
{
    set_max_threads(opts.threads);
    std::ostringstream out;
    if (t.which == "scaling") {
        const std::vector<Eigen::Index> sizes(t.sizes.begin(), t.sizes.end());
        write_scaling_means_csv(out, scaling_mean_table(sizes, t.replications, opts.seed));
    } else if (t.which == "uniform") {
        const std::vector<int> qs = t.q.empty() ? std::vector<int>{2, 5} : t.q;
        for (std::size_t i = 0; i < qs.size(); ++i) {
            std::ostringstream block;
            write_uniform_profile_csv(block, qs[i], t.n, uniform_profile_table(qs[i], t.n, t.phi, t.kl_epsilon));
            std::string text = block.str();
            if (i > 0)
                text = text.substr(text.find('\n') + 1);
            out << text;
        }
    } else if (t.which == "skew") {
        const std::vector<int> qs = t.q.empty() ? std::vector<int>{2, 3, 5, 9} : t.q;
        write_skew_csv_header(out);
        for (int q : qs)
            for (const auto& row : uniform_profile_table(q, t.n, t.phi, t.kl_epsilon))
                write_skew_csv_rows(out, q, row.kind, skew_profile(q, row.kind, skew_grid(), t.n, t.phi, t.kl_epsilon));
    } else {
        throw Error("unknown table '" + t.which + "' (use scaling|uniform|skew)");
    }
    emit(opts.out, out.str());
}

struct SimulateOptions {
    std::string study = "effects";
    int replications = 100;
    long n = 500;
    std::vector<int> categories = {2, 3, 5, 9, 0, 0};
    std::vector<int> q = {2, 3, 5, 9};
    std::vector<std::string> variants;
    int dims = 2;
    bool summary = false;
};

std::vector<Variant> parse_variants(const std::vector<std::string>& names)
{
    if (names.empty())
        return all_variants();
    std::vector<Variant> out;
    for (const auto& name : names)
        out.push_back(parse_variant(name));
    return out;
}

std::string summary_csv(const std::map<std::tuple<std::string, std::string, std::string>, std::vector<double>>& groups)
{
    std::ostringstream out;
    out.precision(output_precision);
    out << "variant,item,metric,mean,sd,min,q1,median,q3,max,count\n";
    for (const auto& [key, values] : groups) {
        const Summary s = summarize(values);
        out << std::get<0>(key) << ',' << std::get<1>(key) << ',' << std::get<2>(key) << ',' << s.mean << ',' << s.sd
            << ',' << s.min << ',' << s.q1 << ',' << s.median << ',' << s.q3 << ',' << s.max << ',' << s.count << '\n';
    }
    return out.str();
}

void cmd_simulate(const CommonOptions& opts, const SimulateOptions& s)
{
    set_max_threads(opts.threads);
    std::ostringstream out;
    std::map<std::tuple<std::string, std::string, std::string>, std::vector<double>> groups;
    if (s.study == "effects") {
        EffectsParams params;
        params.replications = s.replications;
        params.n = s.n;
        params.categories = s.categories;
        params.mds_dimension = s.dims;
        params.seed = opts.seed;
        params.variants = parse_variants(s.variants);
        const auto records = run_variable_effects(params);
        if (!s.summary) {
            write_effects_csv(out, records);
        } else {
            for (const auto& r : records) {
                const std::string metric(to_string(r.metric));
                groups[{std::string(to_string(r.variant)), r.variable, metric + "_absolute"}].push_back(r.absolute);
                groups[{std::string(to_string(r.variant)), r.variable, metric + "_relative"}].push_back(r.relative);
            }
            out << summary_csv(groups);
        }
    } else if (s.study == "retrieval") {
        RetrievalParams params;
        params.replications = s.replications;
        params.n = s.n;
        params.category_counts = s.q;
        params.mds_dimension = s.dims;
        params.seed = opts.seed;
        params.variants = parse_variants(s.variants);
        const auto records = run_retrieval(params);
        if (!s.summary) {
            write_retrieval_csv(out, records);
        } else {
            for (const auto& r : records)
                groups[{std::string(to_string(r.variant)), "q=" + std::to_string(r.q), "alienation"}].push_back(
                    r.alienation);
            out << summary_csv(groups);
        }
    } else {
        throw Error("unknown study '" + s.study + "' (use effects|retrieval)");
    }
    emit(opts.out, out.str());
}

std::string single_line(std::string message)
{
    for (char& c : message)
        if (c == '\n' || c == '\r')
            c = ' ';
    return message;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Unbiased mixed-type distances, classical MDS and variable importance"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::string format = "square";
    auto* dist = app.add_subcommand("dist", "distance matrix and per-variable summary");
    add_common(dist, opts);
    dist->add_option("--format", format, "square|condensed")->check(CLI::IsMember({"square", "condensed"}));

    std::string distances;
    int dims = 2;
    auto* mds = app.add_subcommand("mds", "classical MDS coordinates and eigenvalue report");
    add_common(mds, opts);
    mds->add_option("--distances", distances, "square distance CSV used instead of --input");
    mds->add_option("--dims", dims, "number of dimensions")->check(CLI::PositiveNumber);

    std::string metric = "both";
    auto* importance = app.add_subcommand("importance", "leave-one-variable-out importance");
    add_common(importance, opts);
    importance->add_option("--metric", metric, "mean_abs_diff|alienation|both");
    importance->add_option("--dims", dims, "MDS dimension for the alienation metric")->check(CLI::PositiveNumber);

    TableOptions table;
    auto* tables = app.add_subcommand("tables", "expected-distance tables");
    tables->add_option("--which", table.which, "scaling|uniform|skew");
    tables->add_option("--q", table.q, "category counts");
    tables->add_option("--n", table.n, "sample size used by IOF and Hennig-Liao");
    tables->add_option("--sizes", table.sizes, "sample sizes for the scaling table");
    tables->add_option("--replications", table.replications, "Monte-Carlo replications for the scaling table");
    tables->add_option("--phi", table.phi, "Hennig-Liao phi");
    tables->add_option("--kl-epsilon", table.kl_epsilon, "zero replacement for Kullback-Leibler");
    tables->add_option("--seed", opts.seed, "root random seed");
    tables->add_option("--threads", opts.threads, "worker threads (0 = all cores)");
    tables->add_option("--out", opts.out, "output file (default stdout)");

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "simulation studies");
    simulate->add_option("--study", sim.study, "effects|retrieval");
    simulate->add_option("--replications", sim.replications, "replications");
    simulate->add_option("--n", sim.n, "rows per instance");
    simulate->add_option("--categories", sim.categories, "effects study: categories per column, 0 keeps it numeric");
    simulate->add_option("--q", sim.q, "retrieval study: category counts");
    simulate->add_option("--variants", sim.variants, "variants to run (default all eight)");
    simulate->add_option("--dims", sim.dims, "MDS dimension")->check(CLI::PositiveNumber);
    simulate->add_flag("--summary", sim.summary, "emit per-group summaries instead of tidy records");
    simulate->add_option("--seed", opts.seed, "root random seed");
    simulate->add_option("--threads", opts.threads, "worker threads (0 = all cores)");
    simulate->add_option("--out", opts.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << single_line(e.what()) << '\n';
        return 2;
    }

    try {
        if (dist->parsed())
            cmd_dist(opts, format);
        else if (mds->parsed())
            cmd_mds(opts, distances, dims);
        else if (importance->parsed())
            cmd_importance(opts, metric, dims);
        else if (tables->parsed())
            cmd_tables(opts, table);
        else if (simulate->parsed())
            cmd_simulate(opts, sim);
    } catch (const std::exception& e) {
        std::cerr << "error: " << single_line(e.what()) << '\n';
        return 1;
    }
    return 0;
}
