#include "mvgl/io.hpp"

#include "mvgl/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace mvgl::io {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_double(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const fs::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidData("cannot write " + path.string());
    return out;
}

std::ifstream open_in(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidData("cannot read " + path.string());
    return in;
}

double parse_double(std::string_view token, const fs::path& path, std::size_t line)
{
    while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
    while (!token.empty() && (token.back() == ' ' || token.back() == '\r')) token.remove_suffix(1);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
        throw InvalidData(path.string() + ":" + std::to_string(line) + ": bad number '" + std::string(token) + "'");
    }
    return value;
}

int parse_node(std::string_view token, const fs::path& path, std::size_t line)
{
    int value = 0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
        throw InvalidData(path.string() + ":" + std::to_string(line) + ": bad node index '" + std::string(token) + "'");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

} // namespace

void write_edge_list(const fs::path& path, const EdgeVector& edges)
{
    auto out = open_out(path);
    const EdgeIndexMap map(edges.nodes());
    for (Eigen::Index e = 0; e < edges.size(); ++e) {
        const double w = -edges[e];
        if (w == 0.0) continue;
        const auto [i, j] = map.pair(e);
        out << i << '\t' << j << '\t' << format_double(w) << '\n';
    }
    if (!out) throw InvalidData("write failed: " + path.string());
}

void write_edge_list(const fs::path& path, const EdgeSet& edges)
{
    write_edge_list(path, edges.to_edge_vector());
}

EdgeVector read_edge_list(const fs::path& path, int n)
{
    auto in = open_in(path);
    EdgeVector edges(n);
    const EdgeIndexMap map(n);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split(line, '\t');
        if (fields.size() != 3) {
            throw InvalidData(path.string() + ":" + std::to_string(lineno) + ": expected i<TAB>j<TAB>weight");
        }
        const int i = parse_node(fields[0], path, lineno);
        const int j = parse_node(fields[1], path, lineno);
        if (i < 0 || j >= n || i >= j) {
            throw InvalidData(path.string() + ":" + std::to_string(lineno) + ": pair out of range for n=" +
                              std::to_string(n));
        }
        edges[map.index(i, j)] = -parse_double(fields[2], path, lineno);
    }
    return edges;
}

EdgeSet read_edge_set(const fs::path& path, int n)
{
    const auto weights = read_edge_list(path, n);
    const EdgeIndexMap map(n);
    std::vector<Edge> edges;
    for (Eigen::Index e = 0; e < weights.size(); ++e) {
        if (-weights[e] > 0.0) edges.push_back(map.pair(e));
    }
    return EdgeSet(n, std::move(edges));
}

void write_matrix_csv(const fs::path& path, const Matrix& X)
{
    auto out = open_out(path);
    std::string row;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        row.clear();
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            if (j) row += ',';
            row += format_double(X(i, j));
        }
        row += '\n';
        out << row;
    }
    if (!out) throw InvalidData("write failed: " + path.string());
}

Matrix read_matrix_csv(const fs::path& path)
{
    auto in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        for (auto token : split(line, ',')) row.push_back(parse_double(token, path, lineno));
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw InvalidData(path.string() + ":" + std::to_string(lineno) + ": ragged row");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InvalidData("empty matrix file " + path.string());
    Matrix X(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return X;
}

void write_json(const fs::path& path, const ordered_json& value)
{
    auto out = open_out(path);
    out << value.dump(2) << '\n';
    if (!out) throw InvalidData("write failed: " + path.string());
}

json read_json(const fs::path& path)
{
    auto in = open_in(path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidConfig(path.string() + ": " + e.what());
    }
}

ordered_json to_json(const datagen::SimulationConfig& c)
{
    ordered_json j;
    j["n"] = c.n;
    j["views"] = c.views;
    j["samples"] = c.samples;
    j["noise"] = c.noise;
    const bool er = c.graph_model.kind == datagen::GraphModel::Kind::ErdosRenyi;
    j["graph"] = er ? "erdos_renyi" : "barabasi_albert";
    j["edge_probability"] = c.graph_model.edge_probability;
    j["growth"] = c.graph_model.growth;
    j["shuffle_fraction"] = c.shuffle_fraction;
    j["seed"] = c.seed;
    return j;
}

namespace {

template <typename T>
T field(const json& j, const std::string& key)
{
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidConfig("config field '" + key + "' has the wrong type");
    }
}

} // namespace

datagen::SimulationConfig simulation_config_from_json(const json& j, datagen::SimulationConfig c)
{
    if (!j.is_object()) throw InvalidConfig("simulation config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "n") c.n = field<int>(j, key);
        else if (key == "views" || key == "N") c.views = field<int>(j, key);
        else if (key == "samples" || key == "p") c.samples = field<int>(j, key);
        else if (key == "noise" || key == "eta") c.noise = field<double>(j, key);
        else if (key == "edge_probability") c.graph_model.edge_probability = field<double>(j, key);
        else if (key == "growth") c.graph_model.growth = field<int>(j, key);
        else if (key == "shuffle_fraction") c.shuffle_fraction = field<double>(j, key);
        else if (key == "seed") {
            if (!value.is_number_unsigned()) {
                throw InvalidConfig("config field 'seed' must be a nonnegative integer");
            }
            c.seed = value.get<std::uint64_t>();
        } else if (key == "graph") {
            const auto kind = field<std::string>(j, key);
            if (kind == "erdos_renyi" || kind == "er") c.graph_model.kind = datagen::GraphModel::Kind::ErdosRenyi;
            else if (kind == "barabasi_albert" || kind == "ba") c.graph_model.kind = datagen::GraphModel::Kind::BarabasiAlbert;
            else throw InvalidConfig("config field 'graph' must be erdos_renyi or barabasi_albert");
        } else {
            throw InvalidConfig("unknown config field '" + key + "'");
        }
    }
    try {
        c.validate();
    } catch (const InvalidConfig& e) {
        throw InvalidConfig(std::string("invalid config: ") + e.what());
    }
    return c;
}

void apply_override(json& target, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw InvalidConfig("override must look like key=value: " + assignment);
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    json* node = &target;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw InvalidConfig("bad override key: " + key);
        if (!node->is_object()) *node = json::object();
        if (dot == std::string::npos) {
            (*node)[part] = std::move(value);
            return;
        }
        node = &(*node)[part];
        start = dot + 1;
    }
}

std::string view_file(int i) { return "view_" + std::to_string(i) + ".csv"; }
std::string truth_view_file(int i) { return "truth_view_" + std::to_string(i) + ".tsv"; }
std::string learned_view_file(int i) { return "learned_view_" + std::to_string(i) + ".tsv"; }

void write_dataset(const fs::path& dir, const datagen::SimulationConfig& config, const datagen::SimulatedData& data)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InvalidData("cannot create " + dir.string() + ": " + ec.message());

    ordered_json manifest;
    manifest["config"] = to_json(config);
    ordered_json views = ordered_json::array();
    ordered_json truth_views = ordered_json::array();
    ordered_json seeds = ordered_json::array();
    for (int i = 0; i < config.views; ++i) {
        write_matrix_csv(dir / view_file(i), data.signals[static_cast<std::size_t>(i)]);
        write_edge_list(dir / truth_view_file(i), data.truth.views[static_cast<std::size_t>(i)]);
        views.push_back(view_file(i));
        truth_views.push_back(truth_view_file(i));
        seeds.push_back(datagen::derive_seed(config.seed, static_cast<std::uint64_t>(i) + 1));
    }
    write_edge_list(dir / "truth_consensus.tsv", data.truth.consensus);
    manifest["files"] = {{"views", views}, {"truth_consensus", "truth_consensus.tsv"}, {"truth_views", truth_views}};
    manifest["seeds"] = {{"consensus", datagen::derive_seed(config.seed, 0)}, {"views", seeds}};
    write_json(dir / "manifest.json", manifest);
}

namespace {

datagen::SimulationConfig manifest_config(const fs::path& dir)
{
    const auto manifest = read_json(dir / "manifest.json");
    if (!manifest.contains("config")) throw InvalidData("manifest.json has no config");
    return simulation_config_from_json(manifest["config"]);
}

} // namespace

datagen::GroundTruth read_truth(const fs::path& dir)
{
    const auto config = manifest_config(dir);
    datagen::GroundTruth truth;
    truth.consensus = read_edge_set(dir / "truth_consensus.tsv", config.n);
    for (int i = 0; i < config.views; ++i) truth.views.push_back(read_edge_set(dir / truth_view_file(i), config.n));
    return truth;
}

Dataset read_dataset(const fs::path& dir)
{
    Dataset out;
    out.config = manifest_config(dir);
    for (int i = 0; i < out.config.views; ++i) {
        auto X = read_matrix_csv(dir / view_file(i));
        if (X.rows() != out.config.n) {
            throw DimensionMismatch(view_file(i) + " has " + std::to_string(X.rows()) + " rows, expected n=" +
                                    std::to_string(out.config.n));
        }
        out.signals.push_back(std::move(X));
    }
    if (fs::exists(dir / "truth_consensus.tsv")) out.truth = read_truth(dir);
    return out;
}

} // namespace mvgl::io
