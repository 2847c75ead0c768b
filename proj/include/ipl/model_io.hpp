#ifndef IPL_MODEL_IO_HPP
#define IPL_MODEL_IO_HPP

#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ipl/common.hpp"
#include "ipl/model.hpp"
#include "ipl/warning_tree.hpp"

namespace ipl {

/// Everything a fit produces, persisted as one human-inspectable JSON
/// document. Numbers serialize in shortest round-trip form, so a loaded
/// model predicts bit-identically to the one that was saved.
struct ModelFile {
    static constexpr int current_version = 1;
    static constexpr const char* format_name = "ipl-model";

    int version = current_version;
    std::string created_at;
    std::uint64_t seed = 0;

    KernelModel model;
    std::optional<SparsePolynomial> sparse;
    std::optional<WarningTree> tree;

    struct FitSummary {
        std::string solver;
        int iterations = 0;
        double final_primal = 0.0;
        double final_dual = 0.0;
        double objective = 0.0;
        bool converged = true;
    };
    std::optional<FitSummary> fit;
};

/// Creation timestamp for output files: honors the SOURCE_DATE_EPOCH
/// convention so that fixed-seed runs can produce byte-identical artifacts.
inline std::string current_timestamp() {
    std::time_t t = 0;
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
        try {
            t = static_cast<std::time_t>(std::stoll(env));
        } catch (const std::exception&) {
            throw ConfigError("SOURCE_DATE_EPOCH is set but not an integer");
        }
    } else {
        t = std::time(nullptr);
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace detail {

using nlohmann::json;

inline json vector_to_json(const VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

inline json matrix_to_json(const MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_to_json(m.row(i).transpose()));
    return rows;
}

inline VectorXd vector_from_json(const json& j, const char* what) {
    if (!j.is_array()) throw ConfigError(std::string(what) + ": expected an array");
    VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ConfigError(std::string(what) + ": expected numbers");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

inline MatrixXd matrix_from_json(const json& j, const char* what) {
    if (!j.is_array()) throw ConfigError(std::string(what) + ": expected an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) return MatrixXd(0, 0);
    const VectorXd first = vector_from_json(j[0], what);
    MatrixXd m(rows, first.size());
    m.row(0) = first;
    for (Eigen::Index i = 1; i < rows; ++i) {
        const VectorXd row = vector_from_json(j[static_cast<std::size_t>(i)], what);
        if (row.size() != m.cols())
            throw ConfigError(std::string(what) + ": ragged matrix rows");
        m.row(i) = row;
    }
    return m;
}

inline json scaling_to_json(const MinMaxScaling& s) {
    return json{{"min", vector_to_json(s.min)}, {"max", vector_to_json(s.max)}};
}

inline MinMaxScaling scaling_from_json(const json& j) {
    MinMaxScaling s;
    s.min = vector_from_json(j.at("min"), "scaling.min");
    s.max = vector_from_json(j.at("max"), "scaling.max");
    check_same_size(s.min.size(), s.max.size(), "scaling");
    return s;
}

inline json index_to_json(const MultiIndex& m) {
    json arr = json::array();
    for (int e : m.exponents) arr.push_back(e);
    return arr;
}

inline MultiIndex index_from_json(const json& j) {
    if (!j.is_array()) throw ConfigError("term exponents: expected an array");
    MultiIndex m;
    for (const auto& e : j) {
        if (!e.is_number_integer() || e.get<int>() < 0)
            throw ConfigError("term exponents: expected non-negative integers");
        m.exponents.push_back(e.get<int>());
    }
    return m;
}

inline json sparse_to_json(const SparsePolynomial& p) {
    json terms = json::array();
    for (const auto& t : p.terms)
        terms.push_back(json{{"exponents", index_to_json(t.index)}, {"coefficient", t.coefficient}});
    json j{{"degree", p.degree}, {"threshold", p.threshold}, {"terms", terms},
           {"feature_names", p.feature_names}};
    if (p.scaling) j["scaling"] = scaling_to_json(*p.scaling);
    return j;
}

inline SparsePolynomial sparse_from_json(const json& j) {
    SparsePolynomial p;
    p.degree = j.at("degree").get<int>();
    p.threshold = j.at("threshold").get<double>();
    p.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    for (const auto& t : j.at("terms"))
        p.terms.push_back({index_from_json(t.at("exponents")), t.at("coefficient").get<double>()});
    if (j.contains("scaling")) p.scaling = scaling_from_json(j.at("scaling"));
    return p;
}

inline json tree_to_json(const WarningTree& t) {
    json nodes = json::array();
    for (const auto& n : t.nodes) {
        if (n.is_leaf) nodes.push_back(json{{"leaf", n.label}});
        else
            nodes.push_back(json{{"feature", n.pool_index},
                                 {"threshold", n.threshold},
                                 {"left", n.left},
                                 {"right", n.right}});
    }
    json terms = json::array();
    for (const auto& m : t.pool_terms) terms.push_back(index_to_json(m));
    return json{{"depth", t.depth},       {"min_leaf", t.min_leaf}, {"nodes", nodes},
                {"pool_terms", terms},    {"pool_names", t.pool_names}};
}

inline WarningTree tree_from_json(const json& j) {
    WarningTree t;
    t.depth = j.at("depth").get<int>();
    t.min_leaf = j.at("min_leaf").get<int>();
    t.pool_names = j.at("pool_names").get<std::vector<std::string>>();
    for (const auto& m : j.at("pool_terms")) t.pool_terms.push_back(index_from_json(m));
    for (const auto& n : j.at("nodes")) {
        WarningTree::Node node;
        if (n.contains("leaf")) {
            node.label = n.at("leaf").get<double>();
            if (node.label != 1.0 && node.label != -1.0)
                throw ConfigError("model file: tree leaf label must be -1 or 1");
        } else {
            node.is_leaf = false;
            node.pool_index = n.at("feature").get<int>();
            node.threshold = n.at("threshold").get<double>();
            node.left = n.at("left").get<int>();
            node.right = n.at("right").get<int>();
            const auto count = static_cast<int>(j.at("nodes").size());
            if (node.pool_index < 0 ||
                node.pool_index >= static_cast<int>(t.pool_terms.size()) || node.left < 0 ||
                node.left >= count || node.right < 0 || node.right >= count)
                throw ConfigError("model file: tree node references are out of range");
        }
        t.nodes.push_back(node);
    }
    return t;
}

} // namespace detail

inline std::string serialize_model_file(const ModelFile& mf) {
    using detail::json;
    mf.model.validate();

    json j;
    j["format"] = ModelFile::format_name;
    j["version"] = mf.version;
    j["created_at"] = mf.created_at.empty() ? current_timestamp() : mf.created_at;
    j["seed"] = mf.seed;

    json model;
    model["degree"] = mf.model.degree;
    model["loss"] = to_string(mf.model.loss);
    model["lag"] = json{{"lx", mf.model.lag.lx}, {"ly", mf.model.lag.ly}};
    model["feature_names"] = mf.model.feature_names;
    model["target_name"] = mf.model.target_name;
    model["center_strategy"] = to_string(mf.model.centers.strategy);
    model["center_seed"] = mf.model.centers.seed;
    model["centers"] = detail::matrix_to_json(mf.model.centers.centers);
    model["weights"] = detail::vector_to_json(mf.model.weights);
    if (mf.model.scaling) model["scaling"] = detail::scaling_to_json(*mf.model.scaling);
    j["model"] = model;

    if (mf.sparse) j["sparse"] = detail::sparse_to_json(*mf.sparse);
    if (mf.tree) j["tree"] = detail::tree_to_json(*mf.tree);
    if (mf.fit)
        j["fit"] = json{{"solver", mf.fit->solver},
                        {"iterations", mf.fit->iterations},
                        {"final_primal", mf.fit->final_primal},
                        {"final_dual", mf.fit->final_dual},
                        {"objective", mf.fit->objective},
                        {"converged", mf.fit->converged}};
    return j.dump(2) + "\n";
}

inline ModelFile parse_model_file(const std::string& text, const std::string& origin) {
    using detail::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": not a valid model document (" + e.what() + ")");
    }
    try {
        if (!j.contains("format") || j.at("format") != ModelFile::format_name)
            throw ConfigError(origin + ": missing or wrong format marker");
        ModelFile mf;
        mf.version = j.at("version").get<int>();
        if (mf.version != ModelFile::current_version)
            throw ConfigError(origin + ": unsupported model version " +
                              std::to_string(mf.version));
        mf.created_at = j.at("created_at").get<std::string>();
        mf.seed = j.at("seed").get<std::uint64_t>();

        const json& model = j.at("model");
        mf.model.degree = model.at("degree").get<int>();
        mf.model.loss = loss_from_string(model.at("loss").get<std::string>());
        mf.model.lag.lx = model.at("lag").at("lx").get<int>();
        mf.model.lag.ly = model.at("lag").at("ly").get<int>();
        mf.model.feature_names = model.at("feature_names").get<std::vector<std::string>>();
        mf.model.target_name = model.at("target_name").get<std::string>();
        mf.model.centers.strategy =
            center_strategy_from_string(model.at("center_strategy").get<std::string>());
        mf.model.centers.seed = model.at("center_seed").get<std::uint64_t>();
        mf.model.centers.centers = detail::matrix_from_json(model.at("centers"), "centers");
        mf.model.weights = detail::vector_from_json(model.at("weights"), "weights");
        if (model.contains("scaling"))
            mf.model.scaling = detail::scaling_from_json(model.at("scaling"));
        mf.model.validate();

        if (j.contains("sparse")) mf.sparse = detail::sparse_from_json(j.at("sparse"));
        if (j.contains("tree")) mf.tree = detail::tree_from_json(j.at("tree"));
        if (j.contains("fit")) {
            const json& f = j.at("fit");
            ModelFile::FitSummary s;
            s.solver = f.at("solver").get<std::string>();
            s.iterations = f.at("iterations").get<int>();
            s.final_primal = f.at("final_primal").get<double>();
            s.final_dual = f.at("final_dual").get<double>();
            s.objective = f.at("objective").get<double>();
            s.converged = f.at("converged").get<bool>();
            mf.fit = s;
        }
        return mf;
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": malformed model document (" + e.what() + ")");
    }
}

inline void save_model_file(const std::string& path, const ModelFile& mf) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << serialize_model_file(mf);
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

inline ModelFile load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "' for reading");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_model_file(text, path);
}

} // namespace ipl

#endif // IPL_MODEL_IO_HPP
